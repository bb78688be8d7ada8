//! Strength-of-nonlocality measures: the game excess S_NL and its plane
//! variant, negativity, the witness-weighted K quantity, the q-mixed
//! S_NL^New that rescues witness-undetected entangled states, and the
//! bound suite tying everything to the Horodecki quantity M(ρ).

use crate::bell::{
    expectation, horodecki_m, p_max, p_max_plane, MeasurementSetting, Plane,
};
use crate::linalg::{
    hermitian_eigenvalues, partial_transpose_b, ComplexMatrix, DensityMatrix,
};
use crate::witness::{w_chsh, WitnessKind};
use crate::{tol, Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// One instantiated inequality with its operands and verdict.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BoundCheck {
    pub label: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub passed: bool,
}

impl BoundCheck {
    fn upper(label: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { label, lhs, rhs, passed: lhs <= rhs + 1e-9 }
    }

    fn lower(label: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { label, lhs, rhs, passed: lhs >= rhs - 1e-9 }
    }
}

/// Everything the strength pipeline produces for one (state, witness) pair.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StrengthReport {
    /// Game win probability for the witness's Bell operator.
    pub p_max: f64,
    /// max{P^max − 3/4, 0}.
    pub s_nl: f64,
    pub negativity: f64,
    /// Horodecki quantity of the state.
    pub m: f64,
    /// Whether the witness expectation is strictly negative.
    pub detected: bool,
    /// K = Tr[Wρρ^{T_B}]/(4N); present only for entangled, undetected states.
    pub k: Option<f64>,
    /// Threshold q < K/(3/4 − P^max + K); present when K > 0.
    pub q_upper: Option<f64>,
    /// q(P^max − 3/4) + (1 − q)K for the supplied q.
    pub s_nl_new: Option<f64>,
    pub bounds: Vec<BoundCheck>,
}

/// S_NL = max{P^max − 3/4, 0} at the given setting; identical to
/// max{−Tr[W_CHSH ρ]/8, 0}.
pub fn s_nl(rho: &DensityMatrix, s: &MeasurementSetting) -> Result<f64> {
    let from_game = (p_max(rho, s)? - 0.75).max(0.0);
    let from_witness = (-expectation(&w_chsh(s)?, rho)? / 8.0).max(0.0);
    debug_assert!((from_game - from_witness).abs() < tol::DUAL_FORM);
    Ok(from_game)
}

/// Plane variant: the largest of the three plane excesses, floored at zero.
pub fn s_nl_planes(rho: &DensityMatrix) -> Result<f64> {
    let mut best = 0.0f64;
    for p in Plane::ALL {
        best = best.max(p_max_plane(rho, p)? - 0.75);
    }
    Ok(best.max(0.0))
}

/// Negativity N(ρ) = max{0, −2λ_min(ρ^{T_B})} of a two-qubit state.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            context: "negativity expects a two-qubit state",
            got: format!("{0}×{0}", rho.dim()),
        });
    }
    let pt = partial_transpose_b(rho.matrix())?;
    let min = hermitian_eigenvalues(&pt)?[0];
    Ok((-2.0 * min).max(0.0))
}

/// K = Tr[W ρ ρ^{T_B}]/(4N(ρ)). Defined only for entangled states; the
/// construction divides by the negativity. The trace of a product of three
/// Hermitian operators can carry an imaginary part for generic states (it is
/// real for the X-shaped families the measure was designed around), so K is
/// taken as the real part — equivalently, the symmetrized trace
/// ½(Tr[Wρρ^{T_B}] + c.c.)/(4N).
pub fn k_quantity(rho: &DensityMatrix, w: &ComplexMatrix) -> Result<f64> {
    let n = negativity(rho)?;
    if n <= tol::ENTANGLEMENT_GATE {
        return Err(Error::Separable { negativity: n });
    }
    let pt = partial_transpose_b(rho.matrix())?;
    let product = w.matmul(rho.matrix()).matmul(&pt);
    Ok(product.trace().re / (4.0 * n))
}

/// P^max implied by a CHSH-shaped witness via P = 3/4 − Tr[Wρ]/8.
fn p_from_witness(rho: &DensityMatrix, w: &ComplexMatrix) -> Result<f64> {
    Ok(0.75 - expectation(w, rho)? / 8.0)
}

/// Mixing-weight threshold q < K/(3/4 − P^max + K), in (0, 1] for
/// undetected states with K > 0.
pub fn q_upper_bound(rho: &DensityMatrix, w: &ComplexMatrix) -> Result<f64> {
    let p = p_from_witness(rho, w)?;
    if p > 0.75 + tol::DETECTION / 8.0 {
        return Err(Error::NotApplicable(
            "q threshold applies in the non-detection regime P^max ≤ 3/4",
        ));
    }
    let k = k_quantity(rho, w)?;
    if k <= 0.0 {
        return Err(Error::Inconclusive { k });
    }
    Ok((k / (0.75 - p + k)).min(1.0))
}

/// S_NL^New = q(P^max − 3/4) + (1 − q)K, strictly positive whenever
/// 0 ≤ q < q_upper_bound.
pub fn s_nl_new(rho: &DensityMatrix, w: &ComplexMatrix, q: f64) -> Result<f64> {
    let q_cap = q_upper_bound(rho, w)?;
    if !(0.0..1.0).contains(&q) || q >= q_cap {
        return Err(Error::OutOfRange { context: "q must satisfy 0 ≤ q < q_upper_bound", value: q });
    }
    let p = p_from_witness(rho, w)?;
    let k = k_quantity(rho, w)?;
    Ok(q * (p - 0.75) + (1.0 - q) * k)
}

/// Instantiates every applicable bound for a (state, witness) pair:
/// the M-cap on the win probability, and — depending on the detection
/// verdict — either the detected-strength caps or the mixed-measure caps.
pub fn bound_suite(
    rho: &DensityMatrix,
    kind: &WitnessKind,
    q: Option<f64>,
) -> Result<StrengthReport> {
    let Some(bell) = kind.bell_part()? else {
        return Err(Error::NotApplicable(
            "bound suite needs a CHSH-shaped witness (chsh or plane)",
        ));
    };
    let w = kind.operator()?;
    let tr_w = expectation(&w, rho)?;
    let b = expectation(&bell, rho)?;
    let p = 0.5 * (1.0 + b / 4.0);
    debug_assert!((p - (0.75 - tr_w / 8.0)).abs() < tol::DUAL_FORM);
    let s = (p - 0.75).max(0.0);
    let detected = tr_w < -tol::DETECTION;
    let m = horodecki_m(rho)?;
    let n = negativity(rho)?;

    let mut bounds =
        vec![BoundCheck::upper("pmax_vs_m_cap", p, 0.5 * (1.0 + m.sqrt() / 2.0))];
    let mut k = None;
    let mut q_upper = None;
    let mut mixed = None;

    if detected {
        bounds.push(BoundCheck::lower(
            "m_lower_bound_from_witness",
            m,
            (1.0 - tr_w / 2.0).powi(2),
        ));
        bounds.push(BoundCheck::upper("detected_strength_cap", s, (m.sqrt() - 1.0) / 4.0));
        bounds.push(BoundCheck::upper(
            "detected_strength_global_cap",
            s,
            (SQRT2 - 1.0) / 4.0,
        ));
    } else if n > tol::ENTANGLEMENT_GATE {
        let k_value = k_quantity(rho, &w)?;
        k = Some(k_value);
        if k_value > 0.0 {
            let cap = (k_value / (0.75 - p + k_value)).min(1.0);
            q_upper = Some(cap);
            if let Some(q) = q {
                if !(0.0..1.0).contains(&q) || q >= cap {
                    return Err(Error::OutOfRange {
                        context: "q must satisfy 0 ≤ q < q_upper_bound",
                        value: q,
                    });
                }
                let s_new = q * (p - 0.75) + (1.0 - q) * k_value;
                mixed = Some(s_new);
                bounds.push(BoundCheck::upper(
                    "mixed_strength_cap",
                    s_new,
                    q * (m.sqrt() - 1.0) / 4.0 + (1.0 - q) * k_value,
                ));
                bounds.push(BoundCheck::upper(
                    "mixed_strength_k_cap",
                    s_new,
                    (1.0 - q) * k_value,
                ));
            }
        }
    }

    Ok(StrengthReport {
        p_max: p,
        s_nl: s,
        negativity: n,
        m,
        detected,
        k,
        q_upper,
        s_nl_new: mixed,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::SignPattern;
    use crate::sampling;
    use crate::states::{from_pauli, named_state, NamedFamily, PauliDiagonalForm};
    use crate::witness::w_plane;
    use rand::Rng;

    fn phi_plus() -> DensityMatrix {
        from_pauli(&PauliDiagonalForm::new([0.0; 3], [0.0; 3], [1.0, -1.0, 1.0])).unwrap()
    }

    fn ms(theta: f64) -> DensityMatrix {
        named_state(NamedFamily::MsReduced { theta }).unwrap()
    }

    fn rho1_setting() -> MeasurementSetting {
        MeasurementSetting::normalized(
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.8, 0.4, 0.447],
            [-0.4, 0.8, 0.447],
        )
        .unwrap()
    }

    #[test]
    fn s_nl_worked_values() {
        let v = s_nl(&named_state(NamedFamily::Rho1).unwrap(), &rho1_setting()).unwrap();
        assert!((v - 0.0035242127185271532).abs() < 1e-9);
        assert!((v - 0.0035).abs() < 1e-4);

        let any = MeasurementSetting::tsirelson(SignPattern::MinusA0B1);
        assert_eq!(s_nl(&DensityMatrix::maximally_mixed(4), &any).unwrap(), 0.0);

        let v = s_nl(&phi_plus(), &any).unwrap();
        assert!((v - (SQRT2 - 1.0) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn dual_forms_agree_on_random_pairs() {
        let mut rng = sampling::seeded_rng(23);
        for _ in 0..100 {
            let rho = sampling::density(&mut rng, 4).unwrap();
            let s = MeasurementSetting::random(&mut rng);
            let game = (p_max(&rho, &s).unwrap() - 0.75).max(0.0);
            let witness = (-expectation(&w_chsh(&s).unwrap(), &rho).unwrap() / 8.0).max(0.0);
            assert!((game - witness).abs() < tol::DUAL_FORM);
        }
    }

    #[test]
    fn plane_strength_values() {
        let v = s_nl_planes(&phi_plus()).unwrap();
        assert!((v - (2.0 * SQRT2 - 2.0) / 8.0).abs() < 1e-12);
        assert!((v - 0.103553).abs() < 1e-6);

        assert_eq!(s_nl_planes(&named_state(NamedFamily::Rho2).unwrap()).unwrap(), 0.0);
        assert_eq!(s_nl_planes(&DensityMatrix::maximally_mixed(4)).unwrap(), 0.0);
    }

    #[test]
    fn negativity_values() {
        assert!((negativity(&phi_plus()).unwrap() - 1.0).abs() < 1e-12);
        assert!(negativity(&DensityMatrix::maximally_mixed(4)).unwrap() < 1e-14);
        for theta in [0.3, std::f64::consts::FRAC_PI_3] {
            let n = negativity(&ms(theta)).unwrap();
            assert!((n - theta.cos()).abs() < 1e-12, "N(ρ^MS) = cos θ, got {n}");
        }
        let x = 0.25;
        let n = negativity(&named_state(NamedFamily::XFamily { x }).unwrap()).unwrap();
        let closed = ((72.0 * x * x - 12.0 * x + 1.0).sqrt() - 1.0) / 3.0;
        assert!((n - closed).abs() < 1e-12);
    }

    #[test]
    fn k_values_for_ms_and_x_family() {
        let theta = std::f64::consts::FRAC_PI_3;
        let kxy = k_quantity(&ms(theta), &w_plane(Plane::Xy)).unwrap();
        assert!((kxy - 1.0 / (4.0 * theta.cos())).abs() < 1e-12);

        let kyz = k_quantity(&ms(theta), &w_plane(Plane::Yz)).unwrap();
        let closed = (2.0 - SQRT2 + SQRT2 * theta.cos()) / (8.0 * theta.cos());
        assert!((kyz - closed).abs() < 1e-12);

        let x = 0.25f64;
        let k = k_quantity(
            &named_state(NamedFamily::XFamily { x }).unwrap(),
            &w_plane(Plane::Xy),
        )
        .unwrap();
        let root = (72.0 * x * x - 12.0 * x + 1.0).sqrt();
        let closed = (1.0 - 2.0 * (1.0 + SQRT2) * x + 6.0 * x * x) / (2.0 * (root - 1.0));
        assert!((k - closed).abs() < 1e-9, "direct {k} vs closed {closed}");

        assert!(matches!(
            k_quantity(&DensityMatrix::maximally_mixed(4), &w_plane(Plane::Xy)),
            Err(Error::Separable { .. })
        ));
    }

    #[test]
    fn q_thresholds() {
        let theta = std::f64::consts::FRAC_PI_3;
        let q = q_upper_bound(&ms(theta), &w_plane(Plane::Xy)).unwrap();
        assert!((q - 2.0 / 3.0).abs() < 1e-12, "1/(1 + cos π/3) = 2/3, got {q}");

        // Threshold sweeps (0.55, 1] across the x-family's entangled range.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..50 {
            let x = 0.1668 + (0.33299 - 0.1668) * (k as f64) / 49.0;
            let rho = named_state(NamedFamily::XFamily { x }).unwrap();
            let q = q_upper_bound(&rho, &w_plane(Plane::Xy)).unwrap();
            lo = lo.min(q);
            hi = hi.max(q);
        }
        assert!(lo > 0.55 && lo < 0.56, "threshold floor ≈ 0.55, got {lo}");
        assert!(hi > 0.99 && hi <= 1.0, "threshold approaches 1, got {hi}");

        // θ → π/2 sends K → ∞ and the threshold to 1.
        let q = q_upper_bound(&ms(1.5607), &w_plane(Plane::Xy)).unwrap();
        assert!(q > 0.98 && q <= 1.0);

        // Detection regime: |Φ+⟩ is caught by the xz-plane witness.
        assert!(matches!(
            q_upper_bound(&phi_plus(), &w_plane(Plane::Xz)),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn mixed_measure_closed_forms() {
        let theta = std::f64::consts::FRAC_PI_3;
        let c = theta.cos();

        let v = s_nl_new(&ms(theta), &w_plane(Plane::Xy), 0.3).unwrap();
        assert!((v - (0.7 - 0.3 * c) / (4.0 * c)).abs() < 1e-12);

        let v = s_nl_new(&ms(theta), &w_plane(Plane::Yz), 0.001).unwrap();
        let base = 2.0 - SQRT2 + SQRT2 * c;
        let closed = -0.001 * base / 8.0 + 0.999 * base / (8.0 * c);
        assert!((v - closed).abs() < 1e-12);

        let k = k_quantity(&ms(theta), &w_plane(Plane::Xy)).unwrap();
        let v = s_nl_new(&ms(theta), &w_plane(Plane::Xy), 0.0).unwrap();
        assert!((v - k).abs() < 1e-15, "q = 0 degenerates to K");

        assert!(matches!(
            s_nl_new(&ms(theta), &w_plane(Plane::Xy), 0.7),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            s_nl_new(&ms(theta), &w_plane(Plane::Xy), -0.1),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn positivity_holds_below_the_threshold() {
        let mut rng = sampling::seeded_rng(29);
        for k in 0..30 {
            let x = 0.17 + (0.0033 * k as f64);
            let rho = named_state(NamedFamily::XFamily { x }).unwrap();
            let w = w_plane(Plane::Xy);
            let cap = q_upper_bound(&rho, &w).unwrap();
            let q = rng.random_range(0.0..(cap - 1e-9).min(0.999));
            let v = s_nl_new(&rho, &w, q).unwrap();
            assert!(v > 0.0, "x = {x}, q = {q} gave non-positive {v}");
        }
    }

    #[test]
    fn suite_for_detected_state() {
        let rho = named_state(NamedFamily::Rho1).unwrap();
        let report =
            bound_suite(&rho, &WitnessKind::Chsh(rho1_setting()), None).unwrap();
        assert!(report.detected);
        assert!((report.s_nl - 0.0035242127185271532).abs() < 1e-9);
        assert!((report.m - 1.6021).abs() < 1e-9);
        let r3 = report.bounds.iter().find(|b| b.label == "detected_strength_cap").unwrap();
        assert!(r3.passed && (r3.rhs - 0.066436).abs() < 1e-5);
        assert!(report.bounds.iter().all(|b| b.passed), "{:?}", report.bounds);
        assert!(report.k.is_none());
    }

    #[test]
    fn suite_for_the_equality_case() {
        let report = bound_suite(
            &phi_plus(),
            &WitnessKind::Chsh(MeasurementSetting::tsirelson(SignPattern::MinusA0B1)),
            None,
        )
        .unwrap();
        let l1 = report.bounds.iter().find(|b| b.label == "pmax_vs_m_cap").unwrap();
        assert!((l1.lhs - l1.rhs).abs() < 1e-12, "the win-probability cap is tight on |Φ+⟩");
        assert!((report.p_max - 0.5 * (1.0 + SQRT2 / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn suite_for_undetected_state_with_mixing() {
        let theta = std::f64::consts::FRAC_PI_3;
        let report =
            bound_suite(&ms(theta), &WitnessKind::Plane(Plane::Xy), Some(0.3)).unwrap();
        assert!(!report.detected);
        assert!((report.m - 1.25).abs() < 1e-12);
        assert!((report.k.unwrap() - 0.5).abs() < 1e-12);
        assert!((report.q_upper.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((report.s_nl_new.unwrap() - 0.275).abs() < 1e-12);
        assert!(report.bounds.iter().all(|b| b.passed), "{:?}", report.bounds);

        assert!(matches!(
            bound_suite(&ms(theta), &WitnessKind::Plane(Plane::Xy), Some(0.9)),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            bound_suite(&ms(theta), &WitnessKind::Optimal, None),
            Err(Error::NotApplicable(_))
        ));
    }
}
