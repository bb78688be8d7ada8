//! Entanglement witnesses built from CHSH operators: per-setting witnesses
//! W = 2I − B, fixed-plane witnesses, the optimal witness W^opt, detection
//! predicates, the witness-expectation window, the three-witness sum bounds,
//! the strength cap U, and the closed-form CHSH expression for
//! Pauli-diagonal states together with its strength corollary.

use crate::bell::{
    bell_operator, expectation, plane_bell_operator, MeasurementSetting, Plane,
};
use crate::linalg::{partial_transpose_b, ComplexMatrix, DensityMatrix, C64};
use crate::{tol, Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Selector for the three witness families the toolkit manipulates.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessKind {
    /// W = 2I − B(s) for a concrete CHSH measurement setting.
    Chsh(MeasurementSetting),
    /// W^ij = 2I − B_ij for a fixed Pauli plane.
    Plane(Plane),
    /// The optimal witness W^opt.
    Optimal,
}

impl WitnessKind {
    pub fn operator(&self) -> Result<ComplexMatrix> {
        match self {
            Self::Chsh(s) => w_chsh(s),
            Self::Plane(p) => Ok(w_plane(*p)),
            Self::Optimal => Ok(w_opt()),
        }
    }

    /// The Bell operator B with W = 2I − B, when the witness has that shape.
    pub fn bell_part(&self) -> Result<Option<ComplexMatrix>> {
        match self {
            Self::Chsh(s) => Ok(Some(bell_operator(s)?)),
            Self::Plane(p) => Ok(Some(plane_bell_operator(*p))),
            Self::Optimal => Ok(None),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Chsh(_) => "chsh".into(),
            Self::Plane(p) => format!("plane-{}", p.label()),
            Self::Optimal => "optimal".into(),
        }
    }
}

/// Lower endpoint of the W^opt expectation window: ¼ − 3/(4√2).
pub fn witness_window_low() -> f64 {
    0.25 - 3.0 / (4.0 * SQRT2)
}

/// Upper endpoint of the W^opt expectation window: ¼ + 3/(4√2).
pub fn witness_window_high() -> f64 {
    0.25 + 3.0 / (4.0 * SQRT2)
}

/// CHSH witness W = 2I − B for the default sign pattern.
pub fn w_chsh(s: &MeasurementSetting) -> Result<ComplexMatrix> {
    Ok(ComplexMatrix::identity(4).scale_re(2.0).sub(&bell_operator(s)?))
}

/// Fixed-plane witness W^ij = 2I − B_ij.
pub fn w_plane(p: Plane) -> ComplexMatrix {
    ComplexMatrix::identity(4).scale_re(2.0).sub(&plane_bell_operator(p))
}

/// Optimal witness W^opt = ¼[I + (B_xy + B_xz + B_yz)/(2√2)], identical to
/// the partial transpose of the |Φ+⟩ projector.
pub fn w_opt() -> ComplexMatrix {
    let mut b = plane_bell_operator(Plane::Xy);
    b = b.add(&plane_bell_operator(Plane::Xz));
    b = b.add(&plane_bell_operator(Plane::Yz));
    ComplexMatrix::identity(4).add(&b.scale_re(1.0 / (2.0 * SQRT2))).scale_re(0.25)
}

/// The |Φ+⟩⟨Φ+| partial-transpose construction of the optimal witness,
/// kept as an independent cross-check of [`w_opt`].
pub fn w_opt_from_projector() -> ComplexMatrix {
    let h = C64::new(0.5, 0.0);
    let mut proj = ComplexMatrix::zeros(4, 4);
    proj[(0, 0)] = h;
    proj[(0, 3)] = h;
    proj[(3, 0)] = h;
    proj[(3, 3)] = h;
    partial_transpose_b(&proj).expect("4×4 projector always has a partial transpose")
}

/// Witness verdict: Tr[wρ] < −tol certifies entanglement; exact zero is
/// non-detection.
pub fn detects(w: &ComplexMatrix, rho: &DensityMatrix, tolerance: f64) -> Result<bool> {
    Ok(expectation(w, rho)? < -tolerance)
}

fn plane_bells(rho: &DensityMatrix) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(Plane::ALL) {
        *slot = expectation(&plane_bell_operator(p), rho)?;
    }
    Ok(out)
}

/// Tr[W^opt ρ] together with the verdict that it lies inside
/// [¼ − 3/(4√2), ¼ + 3/(4√2)]. Precondition: every plane Bell expectation
/// sits in [−2, 2] (the window is derived under ¼ ≤ P_ij ≤ ¾).
pub fn witness_inequality(rho: &DensityMatrix) -> Result<(f64, bool)> {
    for b in plane_bells(rho)? {
        if b.abs() > 2.0 + 1e-9 {
            return Err(Error::NotApplicable(
                "witness window requires |⟨B_ij⟩| ≤ 2 in every plane",
            ));
        }
    }
    let value = expectation(&w_opt(), rho)?;
    let within =
        value >= witness_window_low() - 1e-9 && value <= witness_window_high() + 1e-9;
    Ok((value, within))
}

/// Sum of the three plane-witness expectations with its bound verdict.
/// Hypotheses: Tr[W^opt ρ] ∈ [¼ − 3/(4√2), 0] and all three plane witnesses
/// nonnegative. Under them the sum lands in [6 + 2√2, 12].
pub fn chsh_sum_bounds(rho: &DensityMatrix) -> Result<(f64, bool)> {
    let w = expectation(&w_opt(), rho)?;
    if !(witness_window_low() - 1e-9..=tol::DETECTION).contains(&w) {
        return Err(Error::NotApplicable(
            "sum bounds require Tr[W^opt ρ] in [¼ − 3/(4√2), 0]",
        ));
    }
    let mut sum = 0.0;
    for p in Plane::ALL {
        let v = expectation(&w_plane(p), rho)?;
        if v < -tol::DETECTION {
            return Err(Error::NotApplicable(
                "sum bounds require nonnegative plane witnesses",
            ));
        }
        sum += v;
    }
    let within = (6.0 + 2.0 * SQRT2 - 1e-9..=12.0 + 1e-9).contains(&sum);
    Ok((sum, within))
}

/// Strength cap from the optimal witness, evaluated at a given expectation:
/// U = ¾ − 1/(2√2) + √2·w.
pub fn u_bound_at(w_expectation: f64) -> f64 {
    0.75 - 1.0 / (2.0 * SQRT2) + SQRT2 * w_expectation
}

/// Strength cap for a state: requires every plane Bell expectation in
/// [−2, 2] and a nonpositive optimal-witness expectation (the regime the
/// cap is derived for).
pub fn u_bound(rho: &DensityMatrix) -> Result<f64> {
    for b in plane_bells(rho)? {
        if b.abs() > 2.0 + 1e-9 {
            return Err(Error::NotApplicable("U requires |⟨B_ij⟩| ≤ 2 in every plane"));
        }
    }
    let w = expectation(&w_opt(), rho)?;
    if w > tol::DETECTION {
        return Err(Error::NotApplicable("U requires Tr[W^opt ρ] ≤ 0"));
    }
    Ok(u_bound_at(w))
}

/// Closed-form CHSH expectation for a Pauli-diagonal state (a = b = 0):
/// Σ_k c_k[λ_k^(0)(μ_k^(0) − μ_k^(1)) + λ_k^(1)(μ_k^(0) + μ_k^(1))].
/// The value obeys ≤ 2 exactly when the diagonal state is local at s.
pub fn diagonal_bell_expression(s: &MeasurementSetting, c: [f64; 3]) -> f64 {
    let mut total = 0.0;
    for k in 0..3 {
        total += c[k]
            * (s.a0[k] * (s.b0[k] - s.b1[k]) + s.a1[k] * (s.b0[k] + s.b1[k]));
    }
    total
}

/// Strength of nonlocality S_NL = (expression − 2)/8 for a detected
/// Pauli-diagonal state; equal to −Tr[W_CHSH ρ]/8. Signals non-detection
/// when the expression falls below the classical value 2.
pub fn diagonal_snl(s: &MeasurementSetting, c: [f64; 3]) -> Result<f64> {
    let expr = diagonal_bell_expression(s, c);
    if expr < 2.0 - tol::DUAL_FORM {
        return Err(Error::NotApplicable(
            "witness does not detect the state: expression below 2",
        ));
    }
    Ok(((expr - 2.0) / 8.0).max(0.0))
}
