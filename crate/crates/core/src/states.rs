//! State constructors: the Pauli-diagonal two-qubit form, the named worked
//! families, canonical three-qubit pure states, and their A⊗B reductions.
//!
//! Conventions fixed here and used everywhere else: two-qubit basis order
//! |q_A q_B⟩, three-qubit order |q_A q_B q_C⟩ with C last; the canonical
//! three-qubit state carries its phase on the |100⟩ amplitude. Every
//! constructor validates positivity eagerly — parameter ranges alone do not
//! guarantee a state.

use crate::linalg::{
    pauli, tensor, ComplexMatrix, DensityMatrix, C64,
};
use crate::{tol, Error, Result};

/// Two-qubit state in the diagonal-correlation Pauli form
/// ρ = ¼[I⊗I + a·σ⊗I + I⊗b·σ + Σ_j c_j σ_j⊗σ_j].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliDiagonalForm {
    /// Bloch vector of qubit A.
    pub a: [f64; 3],
    /// Bloch vector of qubit B.
    pub b: [f64; 3],
    /// Diagonal correlation coefficients (c_1, c_2, c_3).
    pub c: [f64; 3],
}

impl PauliDiagonalForm {
    pub fn new(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> Self {
        Self { a, b, c }
    }

    /// Builds the 4×4 matrix and verifies it is a state. Positivity is not
    /// automatic for arbitrary (a, b, c), so failure is an expected outcome.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let id = ComplexMatrix::identity(2);
        let mut m = tensor(&id, &id);
        for j in 0..3 {
            let s = pauli(j);
            m = m.add(&tensor(&s, &id).scale_re(self.a[j]));
            m = m.add(&tensor(&id, &s).scale_re(self.b[j]));
            m = m.add(&tensor(&s, &s).scale_re(self.c[j]));
        }
        DensityMatrix::new(m.scale_re(0.25))
    }
}

/// ρ = ¼[I⊗I + a·σ⊗I + I⊗b·σ + Σ_j c_j σ_j⊗σ_j], validated.
pub fn from_pauli(p: &PauliDiagonalForm) -> Result<DensityMatrix> {
    p.to_density()
}

/// Correlation matrix t_ij = Tr[ρ (σ_i ⊗ σ_j)] of a two-qubit state.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<[[f64; 3]; 3]> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            context: "correlation_matrix expects a two-qubit state",
            got: format!("{0}×{0}", rho.dim()),
        });
    }
    let mut t = [[0.0; 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, item) in row.iter_mut().enumerate() {
            let op = tensor(&pauli(i), &pauli(j));
            let v = op.matmul(rho.matrix()).trace();
            if v.im.abs() > tol::IMAG_RESIDUE {
                return Err(Error::NotHermitian { residual: v.im.abs() });
            }
            *item = v.re;
        }
    }
    Ok(t)
}

/// Named state families with their legal parameter intervals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedFamily {
    /// Pauli form with a = (0.001, 0, 0), c = (0.8, 0.89, −0.9).
    Rho1,
    /// Pauli form with c = (0.7, 0.2, −0.5).
    Rho2,
    /// Pauli form with a = (−0.01, 0, 0), b = (0, 0, 0.002),
    /// c = (−0.7, −0.7, −0.67).
    Rho3,
    /// diag(x, 1/3, 1/3, 1/3 − x) with x on the inner off-diagonal,
    /// x ∈ [0, 1/3].
    XFamily { x: f64 },
    /// The a-parametrised X-shaped state, a ∈ (0.1, 0.65).
    RhoN { a: f64 },
    /// Reduction of the maximal-slice state, θ ∈ [0, π/2].
    MsReduced { theta: f64 },
    /// Reduction of the Type-I W-class family, λ_0 ∈ [0, √0.91].
    TypeI { lambda0: f64 },
    /// Reduction of the Type-II W-class family, λ_0 ∈ [0.1, 0.7].
    TypeII { lambda0: f64 },
}

impl NamedFamily {
    /// Parses a CLI/JSON family tag plus optional parameter.
    pub fn parse(tag: &str, parameter: Option<f64>) -> Result<Self> {
        let need = |name: &'static str| {
            parameter.ok_or(Error::OutOfRange { context: name, value: f64::NAN })
        };
        let fam = match tag.to_ascii_lowercase().as_str() {
            "rho1" => Self::Rho1,
            "rho2" => Self::Rho2,
            "rho3" => Self::Rho3,
            "x" | "xfamily" => Self::XFamily { x: need("x-family requires x")? },
            "rhon" | "rho_n" => Self::RhoN { a: need("rho_n requires a")? },
            "ms" => Self::MsReduced { theta: need("ms requires theta")? },
            "t1" | "wclass1" => Self::TypeI { lambda0: need("t1 requires lambda0")? },
            "t2" | "wclass2" => Self::TypeII { lambda0: need("t2 requires lambda0")? },
            other => return Err(Error::InvalidSpec(format!("unknown family tag `{other}`"))),
        };
        fam.check_interval()?;
        Ok(fam)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::Rho1 => "rho1",
            Self::Rho2 => "rho2",
            Self::Rho3 => "rho3",
            Self::XFamily { .. } => "x",
            Self::RhoN { .. } => "rhon",
            Self::MsReduced { .. } => "ms",
            Self::TypeI { .. } => "t1",
            Self::TypeII { .. } => "t2",
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match *self {
            Self::Rho1 | Self::Rho2 | Self::Rho3 => None,
            Self::XFamily { x } => Some(x),
            Self::RhoN { a } => Some(a),
            Self::MsReduced { theta } => Some(theta),
            Self::TypeI { lambda0 } | Self::TypeII { lambda0 } => Some(lambda0),
        }
    }

    fn check_interval(&self) -> Result<()> {
        let reject = |context: &'static str, value: f64| Err(Error::OutOfRange { context, value });
        match *self {
            Self::Rho1 | Self::Rho2 | Self::Rho3 => Ok(()),
            Self::XFamily { x } => {
                if !(0.0..=1.0 / 3.0).contains(&x) {
                    return reject("x-family requires 0 ≤ x ≤ 1/3", x);
                }
                Ok(())
            }
            Self::RhoN { a } => {
                if !(a > 0.1 && a < 0.65) {
                    return reject("rho_n requires 0.1 < a < 0.65", a);
                }
                Ok(())
            }
            Self::MsReduced { theta } => {
                if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
                    return reject("ms requires 0 ≤ theta ≤ π/2", theta);
                }
                Ok(())
            }
            Self::TypeI { lambda0 } => {
                if !(0.0..=0.91f64.sqrt()).contains(&lambda0) {
                    return reject("t1 requires 0 ≤ lambda0 ≤ √0.91", lambda0);
                }
                Ok(())
            }
            Self::TypeII { lambda0 } => {
                if !(0.1..=0.7).contains(&lambda0) {
                    return reject("t2 requires 0.1 ≤ lambda0 ≤ 0.7", lambda0);
                }
                Ok(())
            }
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        named_state(*self)
    }
}

/// Builds the named family member as a validated density matrix.
pub fn named_state(family: NamedFamily) -> Result<DensityMatrix> {
    family.check_interval()?;
    match family {
        NamedFamily::Rho1 => {
            from_pauli(&PauliDiagonalForm::new([0.001, 0.0, 0.0], [0.0; 3], [0.8, 0.89, -0.9]))
        }
        NamedFamily::Rho2 => {
            from_pauli(&PauliDiagonalForm::new([0.0; 3], [0.0; 3], [0.7, 0.2, -0.5]))
        }
        NamedFamily::Rho3 => from_pauli(&PauliDiagonalForm::new(
            [-0.01, 0.0, 0.0],
            [0.0, 0.0, 0.002],
            [-0.7, -0.7, -0.67],
        )),
        NamedFamily::XFamily { x } => {
            let third = 1.0 / 3.0;
            DensityMatrix::new(ComplexMatrix::from_real_rows(&[
                vec![x, 0.0, 0.0, 0.0],
                vec![0.0, third, x, 0.0],
                vec![0.0, x, third, 0.0],
                vec![0.0, 0.0, 0.0, third - x],
            ]))
        }
        NamedFamily::RhoN { a } => DensityMatrix::new(ComplexMatrix::from_real_rows(&[
            vec![(1.0 - a) / 6.0, 0.0, 0.0, 0.0005],
            vec![0.0, 5.0 / 6.0 - a, -0.251, 0.0],
            vec![0.0, -0.251, a, 0.0],
            vec![0.0005, 0.0, 0.0, a / 6.0],
        ])),
        NamedFamily::MsReduced { theta } => {
            let h = theta.cos() / 2.0;
            DensityMatrix::new(ComplexMatrix::from_real_rows(&[
                vec![0.5, 0.0, 0.0, h],
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 0.0],
                vec![h, 0.0, 0.0, 0.5],
            ]))
        }
        NamedFamily::TypeI { lambda0 } => {
            let l3 = (0.91 - lambda0 * lambda0).max(0.0).sqrt();
            DensityMatrix::new(ComplexMatrix::from_real_rows(&[
                vec![lambda0 * lambda0, 0.0, 0.0, lambda0 * l3],
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.09, 0.0],
                vec![lambda0 * l3, 0.0, 0.0, l3 * l3],
            ]))
        }
        NamedFamily::TypeII { lambda0 } => {
            let t = (0.51 - lambda0 * lambda0).max(0.0).sqrt();
            let phi = [
                C64::new(lambda0, 0.0),
                C64::ZERO,
                C64::new(0.7, 0.0),
                C64::new(t, 0.0),
            ];
            DensityMatrix::from_state_vector(&phi)
        }
    }
}

/// Canonical three-qubit pure state
/// λ_0|000⟩ + λ_1 e^{iθ}|100⟩ + λ_2|101⟩ + λ_3|110⟩ + λ_4|111⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Canonical3Q {
    /// Schmidt-like coefficients λ_0..λ_4, each in [0, 1].
    pub lambda: [f64; 5],
    /// Phase on the |100⟩ amplitude, in [0, π].
    pub theta: f64,
}

impl Canonical3Q {
    pub fn new(lambda: [f64; 5], theta: f64) -> Result<Self> {
        for &l in &lambda {
            if !(0.0..=1.0).contains(&l) {
                return Err(Error::OutOfRange {
                    context: "canonical coefficients must lie in [0, 1]",
                    value: l,
                });
            }
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::OutOfRange { context: "phase must lie in [0, π]", value: theta });
        }
        let norm2: f64 = lambda.iter().map(|l| l * l).sum();
        if (norm2 - 1.0).abs() > tol::UNIT_NORM {
            return Err(Error::NotUnit { norm: norm2.sqrt() });
        }
        Ok(Self { lambda, theta })
    }

    /// GHZ: λ_0 = λ_4 = 1/√2.
    pub fn ghz() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { lambda: [s, 0.0, 0.0, 0.0, s], theta: 0.0 }
    }

    /// Maximal-slice state (|000⟩ + cos θ|110⟩ + sin θ|111⟩)/√2.
    pub fn ms(theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::OutOfRange { context: "ms requires 0 ≤ theta ≤ π/2", value: theta });
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::new([s, 0.0, 0.0, theta.cos() * s, theta.sin() * s], 0.0)
    }

    /// Type-I W-class member λ_0|000⟩ + 0.3|101⟩ + √(0.91−λ_0²)|110⟩.
    pub fn w_class_one(lambda0: f64) -> Result<Self> {
        NamedFamily::TypeI { lambda0 }.check_interval()?;
        let l3 = (0.91 - lambda0 * lambda0).max(0.0).sqrt();
        Self::new([lambda0, 0.0, 0.3, l3, 0.0], 0.0)
    }

    /// Type-II W-class member λ_0|000⟩ + 0.7|100⟩ + √(0.51−λ_0²)|110⟩.
    pub fn w_class_two(lambda0: f64) -> Result<Self> {
        NamedFamily::TypeII { lambda0 }.check_interval()?;
        let l3 = (0.51 - lambda0 * lambda0).max(0.0).sqrt();
        Self::new([lambda0, 0.7, 0.0, l3, 0.0], 0.0)
    }

    /// The state vector in the |q_A q_B q_C⟩ basis (index 4a + 2b + c).
    pub fn state_vector(&self) -> [C64; 8] {
        let [l0, l1, l2, l3, l4] = self.lambda;
        let mut v = [C64::ZERO; 8];
        v[0b000] = C64::new(l0, 0.0);
        v[0b100] = C64::from_polar(l1, self.theta);
        v[0b101] = C64::new(l2, 0.0);
        v[0b110] = C64::new(l3, 0.0);
        v[0b111] = C64::new(l4, 0.0);
        v
    }
}

/// Rank-1 projector onto the canonical state, as an 8×8 density matrix.
pub fn canonical_to_state(c: &Canonical3Q) -> Result<DensityMatrix> {
    DensityMatrix::from_state_vector(&c.state_vector())
}

/// Closed-form reduction of the canonical state onto qubits A and B
/// (qubit C traced out). Matches `partial_trace` of the projector.
pub fn reduce_to_ab(c: &Canonical3Q) -> Result<DensityMatrix> {
    let [l0, l1, l2, l3, l4] = c.lambda;
    let phase = C64::from_polar(1.0, c.theta);
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = C64::new(l0 * l0, 0.0);
    m[(0, 2)] = phase.conj().scale(l0 * l1);
    m[(0, 3)] = C64::new(l0 * l3, 0.0);
    m[(2, 2)] = C64::new(l1 * l1 + l2 * l2, 0.0);
    m[(2, 3)] = phase.scale(l1 * l3) + C64::new(l2 * l4, 0.0);
    m[(3, 3)] = C64::new(l3 * l3 + l4 * l4, 0.0);
    m[(2, 0)] = m[(0, 2)].conj();
    m[(3, 0)] = m[(0, 3)].conj();
    m[(3, 2)] = m[(2, 3)].conj();
    DensityMatrix::new(m)
}

/// State-definition document: exactly one of the four supported forms.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSpec {
    /// {"pauli": {"a": [..], "b": [..], "c": [..]}}
    Pauli { a: [f64; 3], b: [f64; 3], c: [f64; 3] },
    /// {"matrix": [[re, im], ..]} — row-major, 16 (4×4) or 64 (8×8) pairs.
    Matrix(Vec<[f64; 2]>),
    /// {"family": {"tag": "..", "parameter": v}}
    Family { tag: String, parameter: Option<f64> },
    /// {"canonical3q": {"lambda": [..], "theta": v}}
    #[serde(rename = "canonical3q")]
    Canonical3Q { lambda: [f64; 5], theta: f64 },
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        match self {
            Self::Pauli { a, b, c } => PauliDiagonalForm::new(*a, *b, *c).to_density(),
            Self::Matrix(pairs) => {
                let n = match pairs.len() {
                    16 => 4,
                    64 => 8,
                    other => {
                        return Err(Error::InvalidSpec(format!(
                            "matrix form needs 16 or 64 [re, im] pairs, got {other}"
                        )))
                    }
                };
                let mut m = ComplexMatrix::zeros(n, n);
                for (k, [re, im]) in pairs.iter().enumerate() {
                    m[(k / n, k % n)] = C64::new(*re, *im);
                }
                DensityMatrix::new(m)
            }
            Self::Family { tag, parameter } => {
                named_state(NamedFamily::parse(tag, *parameter)?)
            }
            Self::Canonical3Q { lambda, theta } => {
                canonical_to_state(&Canonical3Q::new(*lambda, *theta)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::partial_trace;

    const EXACT: f64 = 1e-14;

    #[test]
    fn pauli_zero_parameters_give_maximally_mixed() {
        let rho = from_pauli(&PauliDiagonalForm::new([0.0; 3], [0.0; 3], [0.0; 3])).unwrap();
        let expected = ComplexMatrix::identity(4).scale_re(0.25);
        assert!(rho.matrix().max_abs_diff(&expected) < EXACT);
    }

    #[test]
    fn pauli_bell_correlations_give_phi_plus() {
        let rho = from_pauli(&PauliDiagonalForm::new([0.0; 3], [0.0; 3], [1.0, -1.0, 1.0])).unwrap();
        let h = 0.5;
        let expected = ComplexMatrix::from_real_rows(&[
            vec![h, 0.0, 0.0, h],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![h, 0.0, 0.0, h],
        ]);
        assert!(rho.matrix().max_abs_diff(&expected) < EXACT);
    }

    #[test]
    fn correlation_matrix_recovers_pauli_coefficients() {
        let rho = named_state(NamedFamily::Rho2).unwrap();
        let t = correlation_matrix(&rho).unwrap();
        let expected = [[0.7, 0.0, 0.0], [0.0, 0.2, 0.0], [0.0, 0.0, -0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((t[i][j] - expected[i][j]).abs() < 1e-12, "t[{i}][{j}] = {}", t[i][j]);
            }
        }

        let mixed = correlation_matrix(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert!(mixed.iter().flatten().all(|&v| v.abs() < EXACT));
    }

    #[test]
    fn rho1_is_a_valid_entangled_input() {
        let rho = named_state(NamedFamily::Rho1).unwrap();
        let t = correlation_matrix(&rho).unwrap();
        assert!((t[0][0] - 0.8).abs() < 1e-12);
        assert!((t[1][1] - 0.89).abs() < 1e-12);
        assert!((t[2][2] + 0.9).abs() < 1e-12);
    }

    #[test]
    fn rho_n_correlations_are_independent_of_a() {
        let mut seen = Vec::new();
        for k in 0..20 {
            let a = 0.1005 + (0.6495 - 0.1005) * (k as f64) / 19.0;
            let rho = named_state(NamedFamily::RhoN { a }).unwrap();
            let t = correlation_matrix(&rho).unwrap();
            assert!((t[0][0] + 0.501).abs() < 1e-12);
            assert!((t[1][1] + 0.503).abs() < 1e-12);
            assert!((t[2][2] + 2.0 / 3.0).abs() < 1e-12);
            seen.push([t[0][0], t[1][1], t[2][2]]);
        }
        for w in seen.windows(2) {
            for j in 0..3 {
                assert!((w[0][j] - w[1][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn x_family_matrix_layout() {
        let rho = named_state(NamedFamily::XFamily { x: 0.2 }).unwrap();
        let m = rho.matrix();
        assert!((m[(0, 0)].re - 0.2).abs() < EXACT);
        assert!((m[(1, 1)].re - 1.0 / 3.0).abs() < EXACT);
        assert!((m[(3, 3)].re - 2.0 / 15.0).abs() < 1e-12);
        assert!((m[(1, 2)].re - 0.2).abs() < EXACT);
        assert!((m[(2, 1)].re - 0.2).abs() < EXACT);
        assert_eq!(m[(0, 3)], C64::ZERO);
    }

    #[test]
    fn type_one_reduction_entry_matches_closed_form() {
        let rho = named_state(NamedFamily::TypeI { lambda0: 0.5 }).unwrap();
        assert!((rho.matrix()[(0, 3)].re - 0.5 * 0.66f64.sqrt()).abs() < EXACT);
        assert!((rho.matrix()[(2, 2)].re - 0.09).abs() < EXACT);
    }

    #[test]
    fn ms_reduction_at_right_angle_is_diagonal() {
        let rho = named_state(NamedFamily::MsReduced { theta: std::f64::consts::FRAC_PI_2 }).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            vec![0.5, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.5],
        ]);
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn parameter_intervals_are_enforced() {
        assert!(matches!(
            named_state(NamedFamily::XFamily { x: 0.34 }),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            named_state(NamedFamily::RhoN { a: 0.1 }),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            named_state(NamedFamily::TypeII { lambda0: 0.09 }),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            NamedFamily::parse("ms", Some(-0.1)),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(NamedFamily::parse("nope", None), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn every_family_is_valid_across_its_grid() {
        let grid = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * (k as f64) / 49.0;
        for k in 0..50 {
            named_state(NamedFamily::XFamily { x: grid(0.0, 1.0 / 3.0, k) }).unwrap();
            named_state(NamedFamily::RhoN { a: grid(0.1005, 0.6495, k) }).unwrap();
            named_state(NamedFamily::MsReduced {
                theta: grid(0.0, std::f64::consts::FRAC_PI_2, k),
            })
            .unwrap();
            named_state(NamedFamily::TypeI { lambda0: grid(0.0, 0.91f64.sqrt(), k) }).unwrap();
            named_state(NamedFamily::TypeII { lambda0: grid(0.1, 0.7, k) }).unwrap();
        }
        named_state(NamedFamily::Rho1).unwrap();
        named_state(NamedFamily::Rho2).unwrap();
        named_state(NamedFamily::Rho3).unwrap();
    }

    #[test]
    fn canonical_ghz_projector() {
        let rho = canonical_to_state(&Canonical3Q::ghz()).unwrap();
        let m = rho.matrix();
        assert!((m[(0, 0)].re - 0.5).abs() < EXACT);
        assert!((m[(0, 7)].re - 0.5).abs() < EXACT);
        assert!((m[(7, 7)].re - 0.5).abs() < EXACT);
        let sq = m.matmul(m);
        assert!(sq.max_abs_diff(m) < 1e-12, "projector must be idempotent");
    }

    #[test]
    fn canonical_basis_states_land_on_the_right_index() {
        let c = Canonical3Q::new([0.0, 0.0, 1.0, 0.0, 0.0], 0.0).unwrap();
        let rho = canonical_to_state(&c).unwrap();
        assert!((rho.matrix()[(5, 5)].re - 1.0).abs() < EXACT, "|101⟩ sits at index 5");
    }

    #[test]
    fn canonical_normalization_is_checked() {
        assert!(matches!(
            Canonical3Q::new([0.9, 0.0, 0.0, 0.0, 0.0], 0.0),
            Err(Error::NotUnit { .. })
        ));
        assert!(matches!(
            Canonical3Q::new([1.0, 0.0, 0.0, 0.0, 0.0], 4.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn reduction_matches_named_families_and_partial_trace() {
        let ms = Canonical3Q::ms(1.1).unwrap();
        let direct = reduce_to_ab(&ms).unwrap();
        let named = named_state(NamedFamily::MsReduced { theta: 1.1 }).unwrap();
        assert!(direct.matrix().max_abs_diff(named.matrix()) < 1e-12);

        let t1 = Canonical3Q::w_class_one(0.5).unwrap();
        let named = named_state(NamedFamily::TypeI { lambda0: 0.5 }).unwrap();
        assert!(reduce_to_ab(&t1).unwrap().matrix().max_abs_diff(named.matrix()) < 1e-12);

        let t2 = Canonical3Q::w_class_two(0.4).unwrap();
        let named = named_state(NamedFamily::TypeII { lambda0: 0.4 }).unwrap();
        assert!(reduce_to_ab(&t2).unwrap().matrix().max_abs_diff(named.matrix()) < 1e-12);

        // Non-trivial phase: closed form against the generic partial trace.
        let c =
            Canonical3Q::new([0.4, 0.5, 0.3, 0.5916079783099616, 0.3872983346207417], 0.7)
                .unwrap();
        let reduced = reduce_to_ab(&c).unwrap();
        let traced = partial_trace(canonical_to_state(&c).unwrap().matrix(), 2).unwrap();
        assert!(reduced.matrix().max_abs_diff(&traced) < 1e-12);

        let pure = Canonical3Q::new([1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        let reduced = reduce_to_ab(&pure).unwrap();
        assert!((reduced.matrix()[(0, 0)].re - 1.0).abs() < EXACT);
    }

    #[test]
    fn state_spec_documents_round_trip() {
        let pauli = StateSpec::from_json(
            r#"{"pauli": {"a": [0.001, 0, 0], "b": [0, 0, 0], "c": [0.8, 0.89, -0.9]}}"#,
        )
        .unwrap();
        let direct = named_state(NamedFamily::Rho1).unwrap();
        assert!(pauli.to_density().unwrap().matrix().max_abs_diff(direct.matrix()) < EXACT);

        let family = StateSpec::from_json(r#"{"family": {"tag": "x", "parameter": 0.2}}"#).unwrap();
        assert!((family.to_density().unwrap().matrix()[(0, 0)].re - 0.2).abs() < EXACT);

        let matrix = StateSpec::from_json(
            r#"{"matrix": [[0.5,0],[0,0],[0,0],[0.5,0],
                           [0,0],[0,0],[0,0],[0,0],
                           [0,0],[0,0],[0,0],[0,0],
                           [0.5,0],[0,0],[0,0],[0.5,0]]}"#,
        )
        .unwrap();
        let rho = matrix.to_density().unwrap();
        assert!((rho.matrix()[(0, 3)].re - 0.5).abs() < EXACT);

        let canonical = StateSpec::from_json(
            r#"{"canonical3q": {"lambda": [0.70710678118654752, 0, 0, 0, 0.70710678118654752],
                                "theta": 0}}"#,
        )
        .unwrap();
        assert_eq!(canonical.to_density().unwrap().dim(), 8);

        assert!(StateSpec::from_json(r#"{"matrix": [[1,0]]}"#).unwrap().to_density().is_err());
    }
}
