//! Bell/CHSH machinery: observables from Bloch directions, the CHSH operator
//! in both printed sign patterns, fixed-plane Bell operators, expectation
//! values, the Horodecki quantity M(ρ), game win probabilities, and a
//! multi-start optimizer that recovers ⟨B_max⟩ = 2√M numerically.
//!
//! Sign conventions: `SignPattern::MinusA0B1` is the default
//! (B = A₀⊗B₀ − A₀⊗B₁ + A₁⊗B₀ + A₁⊗B₁); `MinusA1B1` is the variant with the
//! minus on the last term. Witnesses are always built as W = 2I − B with the
//! matching pattern.

use rand::Rng;

use crate::linalg::{pauli, singular_values, tensor, ComplexMatrix, DensityMatrix};
use crate::sampling::{seeded_rng, unit_vector};
use crate::states::correlation_matrix;
use crate::{tol, Error, Result};

/// Which of the four CHSH terms carries the minus sign.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignPattern {
    /// B = A₀⊗B₀ − A₀⊗B₁ + A₁⊗B₀ + A₁⊗B₁ (the witness-construction form).
    #[default]
    MinusA0B1,
    /// B = A₀⊗B₀ + A₀⊗B₁ + A₁⊗B₀ − A₁⊗B₁ (the game-identity form).
    MinusA1B1,
}

impl SignPattern {
    /// Coefficients of (A₀B₀, A₀B₁, A₁B₀, A₁B₁).
    pub fn signs(&self) -> [f64; 4] {
        match self {
            Self::MinusA0B1 => [1.0, -1.0, 1.0, 1.0],
            Self::MinusA1B1 => [1.0, 1.0, 1.0, -1.0],
        }
    }
}

/// The four measurement directions of a CHSH experiment, all unit vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementSetting {
    pub a0: [f64; 3],
    pub a1: [f64; 3],
    pub b0: [f64; 3],
    pub b1: [f64; 3],
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn scale3(v: [f64; 3], s: f64) -> [f64; 3] {
    [v[0] * s, v[1] * s, v[2] * s]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

impl MeasurementSetting {
    /// Strict constructor: every direction must be unit norm within 1e−10.
    pub fn new(a0: [f64; 3], a1: [f64; 3], b0: [f64; 3], b1: [f64; 3]) -> Result<Self> {
        for v in [a0, a1, b0, b1] {
            let n = norm3(v);
            if (n - 1.0).abs() > tol::UNIT_NORM {
                return Err(Error::NotUnit { norm: n });
            }
        }
        Ok(Self { a0, a1, b0, b1 })
    }

    /// Forgiving constructor for directions quoted at print precision
    /// (e.g. (0.8, 0.4, 0.447)): each vector is renormalized, and only
    /// near-zero vectors are rejected.
    pub fn normalized(a0: [f64; 3], a1: [f64; 3], b0: [f64; 3], b1: [f64; 3]) -> Result<Self> {
        let mut out = [[0.0; 3]; 4];
        for (slot, v) in out.iter_mut().zip([a0, a1, b0, b1]) {
            let n = norm3(v);
            if n < 1e-6 {
                return Err(Error::NotUnit { norm: n });
            }
            *slot = scale3(v, 1.0 / n);
        }
        Ok(Self { a0: out[0], a1: out[1], b0: out[2], b1: out[3] })
    }

    /// The setting that reaches 2√2 on |Φ+⟩ under the given sign pattern.
    pub fn tsirelson(pattern: SignPattern) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match pattern {
            SignPattern::MinusA0B1 => Self {
                a0: [0.0, 0.0, 1.0],
                a1: [1.0, 0.0, 0.0],
                b0: [s, 0.0, s],
                b1: [s, 0.0, -s],
            },
            SignPattern::MinusA1B1 => Self {
                a0: [0.0, 0.0, 1.0],
                a1: [1.0, 0.0, 0.0],
                b0: [s, 0.0, s],
                b1: [-s, 0.0, s],
            },
        }
    }

    /// Four independent uniform directions.
    pub fn random(rng: &mut impl Rng) -> Self {
        Self {
            a0: unit_vector(rng),
            a1: unit_vector(rng),
            b0: unit_vector(rng),
            b1: unit_vector(rng),
        }
    }
}

/// An unordered pair of distinct Pauli axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plane {
    Xy,
    Yz,
    Xz,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::Xy, Plane::Yz, Plane::Xz];

    /// Axis indices (0 = x, 1 = y, 2 = z).
    pub fn axes(&self) -> (usize, usize) {
        match self {
            Plane::Xy => (0, 1),
            Plane::Yz => (1, 2),
            Plane::Xz => (0, 2),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Plane::Xy => "xy",
            Plane::Yz => "yz",
            Plane::Xz => "xz",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.to_ascii_lowercase().as_str() {
            "xy" | "yx" => Ok(Plane::Xy),
            "yz" | "zy" => Ok(Plane::Yz),
            "xz" | "zx" => Ok(Plane::Xz),
            other => Err(Error::InvalidSpec(format!("unknown plane `{other}`"))),
        }
    }
}

/// Spin observable v·σ. Directions quoted at print precision are accepted
/// up to 1e−3 norm slack and renormalized, so the eigenvalues are exactly ±1.
pub fn observable(v: [f64; 3]) -> Result<ComplexMatrix> {
    let n = norm3(v);
    if (n - 1.0).abs() > 1e-3 {
        return Err(Error::NotUnit { norm: n });
    }
    let u = scale3(v, 1.0 / n);
    let mut m = pauli(0).scale_re(u[0]);
    m = m.add(&pauli(1).scale_re(u[1]));
    m = m.add(&pauli(2).scale_re(u[2]));
    Ok(m)
}

/// CHSH operator for the default sign pattern.
pub fn bell_operator(s: &MeasurementSetting) -> Result<ComplexMatrix> {
    bell_operator_with(s, SignPattern::default())
}

/// CHSH operator B = ±A_i⊗B_j with the requested sign pattern.
pub fn bell_operator_with(s: &MeasurementSetting, pattern: SignPattern) -> Result<ComplexMatrix> {
    let a0 = observable(s.a0)?;
    let a1 = observable(s.a1)?;
    let b0 = observable(s.b0)?;
    let b1 = observable(s.b1)?;
    let [s00, s01, s10, s11] = pattern.signs();
    let mut b = tensor(&a0, &b0).scale_re(s00);
    b = b.add(&tensor(&a0, &b1).scale_re(s01));
    b = b.add(&tensor(&a1, &b0).scale_re(s10));
    b = b.add(&tensor(&a1, &b1).scale_re(s11));
    Ok(b)
}

/// Fixed-plane Bell operator, built term by term from the defining settings
/// A₀ = σ_i, A₁ = σ_j, B₀ = (σ_i+σ_j)/√2, B₁ = (σ_i−σ_j)/√2; it collapses
/// algebraically to √2(σ_i⊗σ_i + σ_j⊗σ_j).
pub fn plane_bell_operator(p: Plane) -> ComplexMatrix {
    let (i, j) = p.axes();
    let si = pauli(i);
    let sj = pauli(j);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bp = si.add(&sj).scale_re(s);
    let bm = si.sub(&sj).scale_re(s);
    let mut b = tensor(&si, &bp);
    b = b.add(&tensor(&si, &bm));
    b = b.add(&tensor(&sj, &bp));
    b = b.sub(&tensor(&sj, &bm));
    b
}

/// Tr[op ρ], demanding a Hermitian operator and a real result.
pub fn expectation(op: &ComplexMatrix, rho: &DensityMatrix) -> Result<f64> {
    if op.rows() != rho.dim() || op.cols() != rho.dim() {
        return Err(Error::Dimension {
            context: "expectation operator/state",
            got: format!("{}×{} vs {}", op.rows(), op.cols(), rho.dim()),
        });
    }
    let residual = op.hermiticity_residual();
    if residual > tol::HERMITICITY {
        return Err(Error::NotHermitian { residual });
    }
    let v = op.matmul(rho.matrix()).trace();
    if v.im.abs() > tol::IMAG_RESIDUE {
        return Err(Error::NotHermitian { residual: v.im.abs() });
    }
    Ok(v.re)
}

fn correlation_as_matrix(rho: &DensityMatrix) -> Result<[[f64; 3]; 3]> {
    correlation_matrix(rho)
}

/// Horodecki quantity M(ρ): the sum of the two largest eigenvalues of TᵀT.
/// The state violates CHSH iff M > 1.
pub fn horodecki_m(rho: &DensityMatrix) -> Result<f64> {
    let t = correlation_as_matrix(rho)?;
    let tm = ComplexMatrix::from_real_rows(&[t[0].to_vec(), t[1].to_vec(), t[2].to_vec()]);
    let sv = singular_values(&tm)?;
    Ok(sv[0] * sv[0] + sv[1] * sv[1])
}

/// Strict CHSH-violation predicate M > 1 + 1e−12 (avoids boundary flapping).
pub fn violates_chsh(rho: &DensityMatrix) -> Result<bool> {
    Ok(horodecki_m(rho)? > 1.0 + tol::CHSH_STRICT)
}

/// ⟨B_max⟩ = 2√M(ρ), the optimal CHSH value over all settings.
pub fn max_bell_value(rho: &DensityMatrix) -> Result<f64> {
    Ok(2.0 * horodecki_m(rho)?.sqrt())
}

/// XOR-game maximum winning probability P^max = ½[1 + ⟨B⟩/4] at a fixed
/// setting (default sign pattern).
pub fn p_max(rho: &DensityMatrix, s: &MeasurementSetting) -> Result<f64> {
    let b = expectation(&bell_operator(s)?, rho)?;
    Ok(0.5 * (1.0 + b / 4.0))
}

/// Plane-restricted win probability P_ij = ½[1 + ⟨B_ij⟩/4].
pub fn p_max_plane(rho: &DensityMatrix, p: Plane) -> Result<f64> {
    let b = expectation(&plane_bell_operator(p), rho)?;
    Ok(0.5 * (1.0 + b / 4.0))
}

/// Knobs for the multi-start setting optimizer.
#[derive(Clone, Copy, Debug)]
pub struct OptimizeOptions {
    /// Independent random restarts (deterministic from `seed`).
    pub starts: usize,
    /// Alternating-ascent sweeps per start.
    pub iterations: usize,
    pub seed: u64,
    pub pattern: SignPattern,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { starts: 32, iterations: 200, seed: 20260825, pattern: SignPattern::default() }
    }
}

fn matvec(t: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [dot3(t[0], v), dot3(t[1], v), dot3(t[2], v)]
}

fn matvec_t(t: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        t[0][0] * v[0] + t[1][0] * v[1] + t[2][0] * v[2],
        t[0][1] * v[0] + t[1][1] * v[1] + t[2][1] * v[2],
        t[0][2] * v[0] + t[1][2] * v[1] + t[2][2] * v[2],
    ]
}

/// Normalize, keeping the previous direction when the gradient vanishes
/// (happens exactly on zero-correlation states).
fn renorm(v: [f64; 3], keep: [f64; 3]) -> [f64; 3] {
    let n = norm3(v);
    if n < 1e-14 {
        keep
    } else {
        scale3(v, 1.0 / n)
    }
}

/// ⟨B⟩ as a function of the Bloch directions: every CHSH term is a bilinear
/// form aᵀ T b in the full correlation matrix.
fn bell_value_bloch(t: &[[f64; 3]; 3], s: &MeasurementSetting, pattern: SignPattern) -> f64 {
    let [s00, s01, s10, s11] = pattern.signs();
    s00 * dot3(s.a0, matvec(t, s.b0))
        + s01 * dot3(s.a0, matvec(t, s.b1))
        + s10 * dot3(s.a1, matvec(t, s.b0))
        + s11 * dot3(s.a1, matvec(t, s.b1))
}

/// Multi-start alternating ascent over the four Bloch directions. Each pass
/// solves Bob's directions exactly for fixed Alice (the optimum of a linear
/// form on the sphere is its normalized gradient), then Alice's for fixed
/// Bob, so the objective is monotone per pass.
pub fn optimize_settings_with(
    rho: &DensityMatrix,
    opts: &OptimizeOptions,
) -> Result<(MeasurementSetting, f64)> {
    let t = correlation_as_matrix(rho)?;
    let mut rng = seeded_rng(opts.seed);
    let mut best_value = f64::NEG_INFINITY;
    let mut best = MeasurementSetting::tsirelson(opts.pattern);
    for _ in 0..opts.starts {
        let mut s = MeasurementSetting::random(&mut rng);
        let mut value = bell_value_bloch(&t, &s, opts.pattern);
        for _ in 0..opts.iterations {
            match opts.pattern {
                SignPattern::MinusA0B1 => {
                    s.b0 = renorm(matvec_t(&t, add3(s.a0, s.a1)), s.b0);
                    s.b1 = renorm(matvec_t(&t, sub3(s.a1, s.a0)), s.b1);
                    s.a0 = renorm(matvec(&t, sub3(s.b0, s.b1)), s.a0);
                    s.a1 = renorm(matvec(&t, add3(s.b0, s.b1)), s.a1);
                }
                SignPattern::MinusA1B1 => {
                    s.b0 = renorm(matvec_t(&t, add3(s.a0, s.a1)), s.b0);
                    s.b1 = renorm(matvec_t(&t, sub3(s.a0, s.a1)), s.b1);
                    s.a0 = renorm(matvec(&t, add3(s.b0, s.b1)), s.a0);
                    s.a1 = renorm(matvec(&t, sub3(s.b0, s.b1)), s.a1);
                }
            }
            let next = bell_value_bloch(&t, &s, opts.pattern);
            if (next - value).abs() < 1e-15 {
                value = next;
                break;
            }
            value = next;
        }
        if value > best_value {
            best_value = value;
            best = s;
        }
    }
    Ok((best, best_value))
}

/// Default-option optimizer; the achieved value sits within 1e−6 of 2√M.
pub fn optimize_settings(rho: &DensityMatrix) -> Result<(MeasurementSetting, f64)> {
    optimize_settings_with(rho, &OptimizeOptions::default())
}
