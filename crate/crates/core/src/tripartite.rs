//! Genuine tripartite nonlocality and the quantities built on top of it: the
//! Svetlichny operator for six measurement directions, a deterministic
//! multi-start see-saw that maximizes its expectation, the 3×9 correlation
//! unfolding whose top singular value caps that maximum, Wootters concurrence
//! and the CKW residual tangle, the controlled-teleportation fidelity and
//! power bounds, and the closed-form curve families linking the two-qubit
//! strength measures to the three-qubit Svetlichny expectation.
//!
//! Conventions: three-qubit states live on qubits (A, B, C) in tensor order,
//! with basis index 4a + 2b + c. Party A measures along `a`/`a2`, party B
//! along `b`/`b2`, party C along `c`/`c2`. Two-qubit reductions trace out
//! qubit C unless stated otherwise.

use crate::bell::{expectation, horodecki_m, p_max_plane, Plane};
use crate::linalg::{
    hermitian_eigen, hermitian_eigenvalues, pauli, singular_values, tensor, trace_out,
    ComplexMatrix, DensityMatrix, C64,
};
use crate::sampling;
use crate::states::{reduce_to_ab, Canonical3Q};
use crate::strength::{negativity, s_nl_new};
use crate::witness::w_plane;
use crate::{tol, Error, Result};
use rand::Rng;

/// Value-change threshold at which the see-saw sweep is declared converged.
const SEESAW_CONVERGENCE: f64 = 1e-13;
/// Gradient norms below this keep the previous direction (flat landscape).
const SEESAW_FLAT: f64 = 1e-15;

// ---------------------------------------------------------------------------
// Settings and the Svetlichny operator
// ---------------------------------------------------------------------------

/// Six unit measurement directions, two per party.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SvetlichnySetting {
    pub a: [f64; 3],
    pub a2: [f64; 3],
    pub b: [f64; 3],
    pub b2: [f64; 3],
    pub c: [f64; 3],
    pub c2: [f64; 3],
}

impl SvetlichnySetting {
    /// Validates that every direction is unit length within `tol::UNIT_NORM`.
    pub fn new(
        a: [f64; 3],
        a2: [f64; 3],
        b: [f64; 3],
        b2: [f64; 3],
        c: [f64; 3],
        c2: [f64; 3],
    ) -> Result<Self> {
        for v in [a, a2, b, b2, c, c2] {
            let n = norm3(v);
            if (n - 1.0).abs() > tol::UNIT_NORM {
                return Err(Error::NotUnit { norm: n });
            }
        }
        Ok(Self { a, a2, b, b2, c, c2 })
    }

    /// The setting that reaches 4√2 on the GHZ state: both pairs for A and B
    /// along x̂ and ŷ, and C along the diagonals (x̂ ∓ ŷ)/√2.
    pub fn ghz_optimal() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a: [1.0, 0.0, 0.0],
            a2: [0.0, 1.0, 0.0],
            b: [1.0, 0.0, 0.0],
            b2: [0.0, 1.0, 0.0],
            c: [s, -s, 0.0],
            c2: [s, s, 0.0],
        }
    }

    /// Six independent uniformly random directions.
    pub fn random(rng: &mut impl Rng) -> Self {
        Self {
            a: sampling::unit_vector(rng),
            a2: sampling::unit_vector(rng),
            b: sampling::unit_vector(rng),
            b2: sampling::unit_vector(rng),
            c: sampling::unit_vector(rng),
            c2: sampling::unit_vector(rng),
        }
    }
}

/// v·σ for an arbitrary (not necessarily unit) real 3-vector.
fn vector_observable(v: [f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    for (axis, &weight) in v.iter().enumerate() {
        if weight != 0.0 {
            m = m.add(&pauli(axis).scale_re(weight));
        }
    }
    m
}

/// The 8×8 Svetlichny operator
/// a·σ ⊗ [b·σ ⊗ (c+c′)·σ + b′·σ ⊗ (c−c′)·σ]
///   + a′·σ ⊗ [b·σ ⊗ (c−c′)·σ − b′·σ ⊗ (c+c′)·σ].
pub fn svetlichny_operator(s: &SvetlichnySetting) -> ComplexMatrix {
    let oa = vector_observable(s.a);
    let oa2 = vector_observable(s.a2);
    let ob = vector_observable(s.b);
    let ob2 = vector_observable(s.b2);
    let cp = vector_observable(add3(s.c, s.c2));
    let cm = vector_observable(sub3(s.c, s.c2));

    let first = tensor(&ob, &cp).add(&tensor(&ob2, &cm));
    let second = tensor(&ob, &cm).sub(&tensor(&ob2, &cp));
    tensor(&oa, &first).add(&tensor(&oa2, &second))
}

/// All 27 three-Pauli correlations E[i][j][k] = ⟨σ_i ⊗ σ_j ⊗ σ_k⟩, indexed by
/// the Pauli axes of qubits A, B, C in that order.
pub type CorrelationTensor = [[[f64; 3]; 3]; 3];

/// Extracts the full three-Pauli correlation tensor of an 8×8 state.
pub fn correlation_tensor(rho3: &DensityMatrix) -> Result<CorrelationTensor> {
    if rho3.dim() != 8 {
        return Err(Error::Dimension {
            context: "correlation tensor expects a three-qubit state",
            got: format!("{0}×{0}", rho3.dim()),
        });
    }
    let mut e = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let partial = tensor(&pauli(i), &pauli(j));
            for k in 0..3 {
                let op = tensor(&partial, &pauli(k));
                let tr = op.matmul(rho3.matrix()).trace();
                if tr.im.abs() > tol::IMAG_RESIDUE {
                    return Err(Error::NotHermitian { residual: tr.im.abs() });
                }
                e[i][j][k] = tr.re;
            }
        }
    }
    Ok(e)
}

/// ⟨S_v⟩ for a state and a setting, via the operator trace.
pub fn svetlichny_expectation(rho3: &DensityMatrix, s: &SvetlichnySetting) -> Result<f64> {
    expectation(&svetlichny_operator(s), rho3)
}

/// ⟨S_v⟩ evaluated by contracting the correlation tensor; identical to the
/// operator trace but much cheaper inside optimizer loops.
pub fn svetlichny_value(e: &CorrelationTensor, s: &SvetlichnySetting) -> f64 {
    let cp = add3(s.c, s.c2);
    let cm = sub3(s.c, s.c2);
    let mut total = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                total += e[i][j][k]
                    * (s.a[i] * (s.b[j] * cp[k] + s.b2[j] * cm[k])
                        + s.a2[i] * (s.b[j] * cm[k] - s.b2[j] * cp[k]));
            }
        }
    }
    total
}

// ---------------------------------------------------------------------------
// See-saw maximization
// ---------------------------------------------------------------------------

/// Multi-start parameters for the Svetlichny see-saw.
#[derive(Debug, Clone, Copy)]
pub struct SvetlichnyOptions {
    /// Random restarts in addition to the deterministic seeds.
    pub starts: usize,
    /// Sweep cap per start; each sweep refreshes all six directions.
    pub iterations: usize,
    /// Seed for the restart generator; fixed default keeps runs reproducible.
    pub seed: u64,
}

impl Default for SvetlichnyOptions {
    fn default() -> Self {
        Self { starts: 64, iterations: 250, seed: 20260825 }
    }
}

/// Maximizes ⟨S_v⟩ over all six directions with default options.
pub fn svetlichny_max(rho3: &DensityMatrix) -> Result<(f64, SvetlichnySetting)> {
    svetlichny_max_with(rho3, SvetlichnyOptions::default())
}

/// Maximizes ⟨S_v⟩ by block-coordinate ascent: each party's pair of
/// directions is the exact maximizer given the others, so the value ascends
/// monotonically to a stationary point; deterministic restarts guard against
/// local maxima. The result is a certified lower bound on the true maximum
/// and is validated elsewhere against the singular-value upper bound.
pub fn svetlichny_max_with(
    rho3: &DensityMatrix,
    options: SvetlichnyOptions,
) -> Result<(f64, SvetlichnySetting)> {
    let e = correlation_tensor(rho3)?;
    let mut rng = sampling::seeded_rng(options.seed);

    let mut best_value = f64::NEG_INFINITY;
    let mut best_setting = SvetlichnySetting::ghz_optimal();

    let total_starts = options.starts.max(1) + 1;
    for start in 0..total_starts {
        let mut s = if start == 0 {
            SvetlichnySetting::ghz_optimal()
        } else {
            SvetlichnySetting::random(&mut rng)
        };
        let mut value = svetlichny_value(&e, &s);
        for _ in 0..options.iterations {
            ascend_party_a(&e, &mut s);
            ascend_party_b(&e, &mut s);
            ascend_party_c(&e, &mut s);
            let next = svetlichny_value(&e, &s);
            if (next - value).abs() < SEESAW_CONVERGENCE {
                value = next;
                break;
            }
            value = next;
        }
        if value > best_value {
            best_value = value;
            best_setting = s;
        }
    }
    Ok((best_value, best_setting))
}

fn ascend_party_a(e: &CorrelationTensor, s: &mut SvetlichnySetting) {
    let cp = add3(s.c, s.c2);
    let cm = sub3(s.c, s.c2);
    let mut ga = [0.0; 3];
    let mut ga2 = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                ga[i] += e[i][j][k] * (s.b[j] * cp[k] + s.b2[j] * cm[k]);
                ga2[i] += e[i][j][k] * (s.b[j] * cm[k] - s.b2[j] * cp[k]);
            }
        }
    }
    renorm_into(&mut s.a, ga);
    renorm_into(&mut s.a2, ga2);
}

fn ascend_party_b(e: &CorrelationTensor, s: &mut SvetlichnySetting) {
    let cp = add3(s.c, s.c2);
    let cm = sub3(s.c, s.c2);
    let mut gb = [0.0; 3];
    let mut gb2 = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                gb[j] += e[i][j][k] * (s.a[i] * cp[k] + s.a2[i] * cm[k]);
                gb2[j] += e[i][j][k] * (s.a[i] * cm[k] - s.a2[i] * cp[k]);
            }
        }
    }
    renorm_into(&mut s.b, gb);
    renorm_into(&mut s.b2, gb2);
}

fn ascend_party_c(e: &CorrelationTensor, s: &mut SvetlichnySetting) {
    let mut gc = [0.0; 3];
    let mut gc2 = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let same = s.a[i] * s.b[j] - s.a2[i] * s.b2[j];
                let cross = s.a[i] * s.b2[j] + s.a2[i] * s.b[j];
                gc[k] += e[i][j][k] * (same + cross);
                gc2[k] += e[i][j][k] * (same - cross);
            }
        }
    }
    renorm_into(&mut s.c, gc);
    renorm_into(&mut s.c2, gc2);
}

// ---------------------------------------------------------------------------
// The 3×9 correlation unfolding and the singular-value bound
// ---------------------------------------------------------------------------

/// Chooses which qubit indexes the rows of the 3×9 unfolding. The remaining
/// two qubits index the columns in ascending order, or swapped. The default
/// puts the qubit measured by (c, c′) on the rows — the unfolding under which
/// the singular-value cap on ⟨S_v⟩ is usually quoted; party symmetry of the
/// Svetlichny combination makes every choice a valid cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct QubitRoles {
    /// Qubit (0, 1, or 2) whose Pauli axis indexes the rows.
    pub row_qubit: usize,
    /// Swap the column-major/column-minor assignment of the remaining qubits.
    pub swap_columns: bool,
}

impl Default for QubitRoles {
    fn default() -> Self {
        Self { row_qubit: 2, swap_columns: false }
    }
}

impl QubitRoles {
    /// All six row/column assignments, for exhaustive layout searches.
    pub fn all() -> [QubitRoles; 6] {
        let mut out = [QubitRoles::default(); 6];
        let mut n = 0;
        for row_qubit in 0..3 {
            for swap_columns in [false, true] {
                out[n] = QubitRoles { row_qubit, swap_columns };
                n += 1;
            }
        }
        out
    }
}

/// The 3×9 unfolding under the default roles: entry (j, 3i + k) holds the
/// three-Pauli correlation with axis j on qubit C, i on qubit A, k on qubit B.
pub fn m_matrix(rho3: &DensityMatrix) -> Result<[[f64; 9]; 3]> {
    m_matrix_with(rho3, QubitRoles::default())
}

/// The 3×9 unfolding for an arbitrary row/column role assignment. Every one
/// of the 27 three-Pauli correlations appears exactly once.
pub fn m_matrix_with(rho3: &DensityMatrix, roles: QubitRoles) -> Result<[[f64; 9]; 3]> {
    if roles.row_qubit > 2 {
        return Err(Error::Dimension {
            context: "row qubit must be 0, 1, or 2",
            got: roles.row_qubit.to_string(),
        });
    }
    let e = correlation_tensor(rho3)?;
    let remaining: Vec<usize> = (0..3).filter(|&q| q != roles.row_qubit).collect();
    let (major, minor) = if roles.swap_columns {
        (remaining[1], remaining[0])
    } else {
        (remaining[0], remaining[1])
    };

    let mut m = [[0.0; 9]; 3];
    for (row, m_row) in m.iter_mut().enumerate() {
        for i in 0..3 {
            for k in 0..3 {
                let mut axes = [0usize; 3];
                axes[roles.row_qubit] = row;
                axes[major] = i;
                axes[minor] = k;
                m_row[3 * i + k] = e[axes[0]][axes[1]][axes[2]];
            }
        }
    }
    Ok(m)
}

/// Singular values (descending) of a 3×9 unfolding.
pub fn m_singular_values(m: &[[f64; 9]; 3]) -> Result<Vec<f64>> {
    let rows: Vec<Vec<f64>> = m.iter().map(|r| r.to_vec()).collect();
    singular_values(&ComplexMatrix::from_real_rows(&rows))
}

/// The cap 4·σ_max on |⟨S_v⟩|, from the default unfolding of the state.
pub fn svetlichny_upper_bound(rho3: &DensityMatrix) -> Result<f64> {
    svetlichny_upper_bound_with(rho3, QubitRoles::default())
}

/// The cap 4·σ_max under an explicit role assignment.
pub fn svetlichny_upper_bound_with(rho3: &DensityMatrix, roles: QubitRoles) -> Result<f64> {
    let m = m_matrix_with(rho3, roles)?;
    Ok(4.0 * m_singular_values(&m)?[0])
}

/// Searches all six role assignments for the unfolding closest to a given
/// 3×9 template, counting entries that differ by more than `tolerance`.
/// Returns the best assignment and its mismatch count.
pub fn best_matching_roles(
    rho3: &DensityMatrix,
    template: &[[f64; 9]; 3],
    tolerance: f64,
) -> Result<(QubitRoles, usize)> {
    let mut best = (QubitRoles::default(), usize::MAX);
    for roles in QubitRoles::all() {
        let m = m_matrix_with(rho3, roles)?;
        let mismatches = m
            .iter()
            .zip(template.iter())
            .flat_map(|(got, want)| got.iter().zip(want.iter()))
            .filter(|(got, want)| (**got - **want).abs() > tolerance)
            .count();
        if mismatches < best.1 {
            best = (roles, mismatches);
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Concurrence and tangle
// ---------------------------------------------------------------------------

/// Wootters concurrence of a two-qubit state: with ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)
/// and ν_1 ≥ … ≥ ν_4 the eigenvalues of √ρ ρ̃ √ρ,
/// C = max{0, √ν_1 − √ν_2 − √ν_3 − √ν_4}.
pub fn concurrence(rho2: &DensityMatrix) -> Result<f64> {
    if rho2.dim() != 4 {
        return Err(Error::Dimension {
            context: "concurrence expects a two-qubit state",
            got: format!("{0}×{0}", rho2.dim()),
        });
    }
    let rho = rho2.matrix();

    let yy = tensor(&pauli(1), &pauli(1));
    let mut conj = ComplexMatrix::zeros(4, 4);
    for r in 0..4 {
        for c in 0..4 {
            conj[(r, c)] = rho[(r, c)].conj();
        }
    }
    let rho_tilde = yy.matmul(&conj).matmul(&yy);

    let (eigs, vecs) = hermitian_eigen(rho)?;
    let mut sqrt_rho = ComplexMatrix::zeros(4, 4);
    for (idx, &lambda) in eigs.iter().enumerate() {
        let root = lambda.max(0.0).sqrt();
        for r in 0..4 {
            for c in 0..4 {
                sqrt_rho[(r, c)] += vecs[(r, idx)] * vecs[(c, idx)].conj() * C64::new(root, 0.0);
            }
        }
    }

    let g = sqrt_rho.matmul(&rho_tilde).matmul(&sqrt_rho);
    let mut roots: Vec<f64> = hermitian_eigenvalues(&g)?
        .into_iter()
        .map(|nu| nu.max(0.0).sqrt())
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).clamp(0.0, 1.0))
}

/// CKW residual tangle of a pure canonical state:
/// τ = C²_{A(BC)} − C²_{AB} − C²_{AC}, with C²_{A(BC)} = 2(1 − Tr ρ_A²).
pub fn tangle(c3: &Canonical3Q) -> Result<f64> {
    let psi = c3.state_vector();
    let rho3 = DensityMatrix::from_state_vector(&psi)?;

    let rho_bc = trace_out(rho3.matrix(), 3, 0)?;
    let purity_bc = rho_bc.matmul(&rho_bc).trace().re;
    let c_cut_sq = 2.0 * (1.0 - purity_bc);

    let rho_ab = DensityMatrix::new(trace_out(rho3.matrix(), 3, 2)?)?;
    let rho_ac = DensityMatrix::new(trace_out(rho3.matrix(), 3, 1)?)?;
    let c_ab = concurrence(&rho_ab)?;
    let c_ac = concurrence(&rho_ac)?;

    let residual = c_cut_sq - c_ab * c_ab - c_ac * c_ac;
    debug_assert!(residual > -1e-8, "monogamy residual {residual} below tolerance");
    Ok(residual.clamp(0.0, 1.0))
}

// ---------------------------------------------------------------------------
// Controlled-teleportation fidelity and power bounds
// ---------------------------------------------------------------------------

/// L = τ + (√2·√(N² + N) − N)², the tangle-negativity combination entering
/// every fidelity and power cap below.
pub fn l_quantity(tau: f64, n: f64) -> f64 {
    let reach = std::f64::consts::SQRT_2 * (n * n + n).sqrt() - n;
    tau + reach * reach
}

/// Exact conditioned fidelity (2 + √(τ + C²))/3 of the optimal protocol,
/// from the partial tangle √(τ + C²).
pub fn conditioned_fidelity_exact(concurrence: f64, tau: f64) -> f64 {
    (2.0 + (tau + concurrence * concurrence).sqrt()) / 3.0
}

/// Upper bound 2/3 + √L/3 on the conditioned fidelity, eliminating the
/// concurrence in favor of the negativity. Requires either entanglement in
/// the reduction or a positive tangle; otherwise the bound degenerates to
/// the classical threshold 2/3 and certifies nothing.
pub fn conditioned_fidelity_upper(rho2: &DensityMatrix, tau: f64) -> Result<f64> {
    if !(0.0..=1.0 + tol::DENSITY).contains(&tau) {
        return Err(Error::OutOfRange { context: "tangle must lie in [0, 1]", value: tau });
    }
    let n = negativity(rho2)?;
    if n <= tol::ENTANGLEMENT_GATE && tau <= tol::ENTANGLEMENT_GATE {
        return Err(Error::NotApplicable(
            "conditioned-fidelity bound needs entanglement or a positive tangle",
        ));
    }
    Ok(2.0 / 3.0 + l_quantity(tau, n).sqrt() / 3.0)
}

/// Lower bound (3 + M(ρ))/6 on the non-conditioned teleportation fidelity.
pub fn f_nc_lower(rho2: &DensityMatrix) -> Result<f64> {
    Ok((3.0 + horodecki_m(rho2)?) / 6.0)
}

/// Every teleportation-power quantity for one pure canonical state: the
/// components (tangle, concurrence, negativity, M, L), the fidelity bounds,
/// the power cap, the positivity window on M, and the strength-linked caps
/// that apply only when the reduction violates the CHSH inequality.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PowerReport {
    pub tangle: f64,
    pub concurrence: f64,
    pub negativity: f64,
    pub m: f64,
    pub l: f64,
    pub f_c_upper: f64,
    pub f_nc_lower: f64,
    pub power_upper: f64,
    /// Present when 1 < M < 1 + 2√L, the window in which the power cap stays
    /// positive despite a CHSH-violating reduction.
    pub window: Option<(f64, f64)>,
    /// Detected strength (√M − 1)/4 of the reduction, floored at zero.
    pub s_nl: f64,
    pub chsh_violated: bool,
    /// Cap (√(1 + 2√L) − 1)/4 on S_NL; only when the reduction violates CHSH.
    pub strength_cap: Option<f64>,
    /// Cap 1/6 − (4/3)·S_NL(1 + 2S_NL) on the power; same applicability.
    pub power_strength_cap: Option<f64>,
}

/// Evaluates every power bound for a pure canonical three-qubit state with
/// the controller on qubit C, so Alice and Bob share the AB reduction.
pub fn power_bounds(c3: &Canonical3Q) -> Result<PowerReport> {
    let tau = tangle(c3)?;
    let rho_ab = reduce_to_ab(c3)?;
    let conc = concurrence(&rho_ab)?;
    let neg = negativity(&rho_ab)?;
    let m = horodecki_m(&rho_ab)?;
    let l = l_quantity(tau, neg);

    let f_c_upper = 2.0 / 3.0 + l.sqrt() / 3.0;
    let f_nc = (3.0 + m) / 6.0;
    let power_upper = f_c_upper - f_nc;

    let window_hi = 1.0 + 2.0 * l.sqrt();
    let chsh_violated = m > 1.0 + tol::CHSH_STRICT;
    let window = (chsh_violated && m < window_hi).then_some((1.0, window_hi));

    let s_nl = ((m.sqrt() - 1.0) / 4.0).max(0.0);
    let strength_cap = chsh_violated.then(|| ((1.0 + 2.0 * l.sqrt()).sqrt() - 1.0) / 4.0);
    let power_strength_cap = chsh_violated.then(|| 1.0 / 6.0 - 4.0 / 3.0 * s_nl * (1.0 + 2.0 * s_nl));

    Ok(PowerReport {
        tangle: tau,
        concurrence: conc,
        negativity: neg,
        m,
        l,
        f_c_upper,
        f_nc_lower: f_nc,
        power_upper,
        window,
        s_nl,
        chsh_violated,
        strength_cap,
        power_strength_cap,
    })
}

// ---------------------------------------------------------------------------
// Curve families
// ---------------------------------------------------------------------------

/// The four parameterized families whose strength measure admits a published
/// closed-form companion for the Svetlichny expectation or its cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CurveFamily {
    /// Maximal-slice states, xy-plane witness, q = 0.3.
    MsXy,
    /// Maximal-slice states, yz-plane witness, q = 0.001.
    MsYz,
    /// W-class Type-I states, detected in the xz plane.
    WClassOne,
    /// W-class Type-II states, xy-plane witness, q = 0.6.
    WClassTwo,
}

impl CurveFamily {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag.to_ascii_lowercase().as_str() {
            "ms-xy" | "msxy" => Ok(Self::MsXy),
            "ms-yz" | "msyz" => Ok(Self::MsYz),
            "wclass1" | "w1" => Ok(Self::WClassOne),
            "wclass2" | "w2" => Ok(Self::WClassTwo),
            other => Err(Error::InvalidSpec(format!(
                "unknown curve family '{other}' (expected ms-xy, ms-yz, wclass1, wclass2)"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::MsXy => "ms-xy",
            Self::MsYz => "ms-yz",
            Self::WClassOne => "wclass1",
            Self::WClassTwo => "wclass2",
        }
    }

    /// Mixing weight used for the family's strength measure, when mixed.
    pub fn q(&self) -> Option<f64> {
        match self {
            Self::MsXy => Some(0.3),
            Self::MsYz => Some(0.001),
            Self::WClassOne => None,
            Self::WClassTwo => Some(0.6),
        }
    }

    /// Legal parameter interval (lo, hi, lo_open, hi_open).
    pub fn interval(&self) -> (f64, f64, bool, bool) {
        match self {
            Self::MsXy | Self::MsYz => (0.0, std::f64::consts::FRAC_PI_2, true, true),
            Self::WClassOne => (0.0, 0.91f64.sqrt(), false, false),
            Self::WClassTwo => (0.1, 0.7, false, false),
        }
    }

    /// Endpoints of the canonical reproduction grid, chosen so the strength
    /// column sweeps the family's published window.
    pub fn default_span(&self) -> (f64, f64) {
        match self {
            Self::MsXy => (0.05, 1.4331),
            Self::MsYz => (0.117, 1.4306),
            Self::WClassOne => (0.335, 0.85),
            Self::WClassTwo => (0.1, 0.7),
        }
    }

    fn contains(&self, x: f64) -> bool {
        let (lo, hi, lo_open, hi_open) = self.interval();
        if x.is_nan() {
            return false;
        }
        let above = if lo_open { x > lo } else { x >= lo };
        let below = if hi_open { x < hi } else { x <= hi };
        above && below
    }
}

/// One grid point of a family curve: the strength measure computed from
/// components and from its published closed form, the see-saw value, the
/// singular-value cap, the published companion for ⟨S_v⟩ (or its cap), and
/// the discrepancy of that companion against the matching computed column.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CurveRow {
    pub parameter: f64,
    pub s_value: f64,
    pub s_closed: f64,
    pub sv_seesaw: f64,
    pub sv_bound: f64,
    pub sv_closed: f64,
    pub difference: f64,
}

/// Evenly spaced reproduction grid over the family's canonical span.
pub fn default_grid(family: CurveFamily, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::OutOfRange {
            context: "a curve grid needs at least two points",
            value: points as f64,
        });
    }
    let (lo, hi) = family.default_span();
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|i| lo + step * i as f64).collect())
}

/// Evaluates a family over a parameter grid. Each row carries the strength
/// measure and the Svetlichny expectation twice over — once through the
/// component pipeline (reduction, witness, negativity, see-saw, singular
/// values) and once through the published closed forms — so agreement or
/// disagreement is visible per point.
pub fn family_curves(family: CurveFamily, grid: &[f64]) -> Result<Vec<CurveRow>> {
    let mut rows = Vec::with_capacity(grid.len());
    for &x in grid {
        if !family.contains(x) {
            return Err(Error::OutOfRange {
                context: "curve grid point outside the family's legal interval",
                value: x,
            });
        }
        rows.push(curve_row(family, x)?);
    }
    Ok(rows)
}

fn curve_row(family: CurveFamily, x: f64) -> Result<CurveRow> {
    let canonical = match family {
        CurveFamily::MsXy | CurveFamily::MsYz => Canonical3Q::ms(x)?,
        CurveFamily::WClassOne => Canonical3Q::w_class_one(x)?,
        CurveFamily::WClassTwo => Canonical3Q::w_class_two(x)?,
    };
    let rho3 = DensityMatrix::from_state_vector(&canonical.state_vector())?;
    let rho_ab = reduce_to_ab(&canonical)?;

    let s_value = match family {
        CurveFamily::MsXy => s_nl_new(&rho_ab, &w_plane(Plane::Xy), 0.3)?,
        CurveFamily::MsYz => s_nl_new(&rho_ab, &w_plane(Plane::Yz), 0.001)?,
        CurveFamily::WClassOne => (p_max_plane(&rho_ab, Plane::Xz)? - 0.75).max(0.0),
        CurveFamily::WClassTwo => s_nl_new(&rho_ab, &w_plane(Plane::Xy), 0.6)?,
    };
    let s_closed = closed_strength(family, x);

    let (sv_seesaw, _) = svetlichny_max(&rho3)?;
    let sv_bound = svetlichny_upper_bound(&rho3)?;
    let sv_closed = closed_svetlichny(family, x, s_value);

    // For the maximal-slice families the companion targets the expectation
    // itself; for the W classes it targets the singular-value cap.
    let difference = match family {
        CurveFamily::MsXy | CurveFamily::MsYz => (sv_closed - sv_seesaw).abs(),
        CurveFamily::WClassOne | CurveFamily::WClassTwo => (sv_closed - sv_bound).abs(),
    };

    Ok(CurveRow { parameter: x, s_value, s_closed, sv_seesaw, sv_bound, sv_closed, difference })
}

/// Published closed form for the family's strength measure.
fn closed_strength(family: CurveFamily, x: f64) -> f64 {
    match family {
        CurveFamily::MsXy => {
            let c = x.cos();
            (0.7 - 0.3 * c) / (4.0 * c)
        }
        CurveFamily::MsYz => {
            let c = x.cos();
            let w = 2.0 - std::f64::consts::SQRT_2 + std::f64::consts::SQRT_2 * c;
            -0.001 * w / 8.0 + 0.999 * w / (8.0 * c)
        }
        CurveFamily::WClassOne => {
            let l3 = (0.91 - x * x).sqrt();
            ((2.82843 * x * l3 - 0.840345) / 8.0).max(0.0)
        }
        CurveFamily::WClassTwo => {
            let root = (51.0 - 100.0 * x * x).sqrt();
            let t = (0.51 - x * x).sqrt();
            let big = 1.02 * x * x + 0.15 * x * root + 0.692965 * x * t;
            (1.0 + 2.0 * x.powi(4) - big) / (x * root)
        }
    }
}

/// Published companion for ⟨S_v⟩ (maximal-slice families) or its cap
/// (W classes), evaluated from the strength where the relation is stated
/// that way and from the parameter where it is not.
fn closed_svetlichny(family: CurveFamily, x: f64, s: f64) -> f64 {
    match family {
        CurveFamily::MsXy => {
            let shifted = s + 3.0 / 40.0;
            4.0 * (2.0 - (49.0 / 1600.0) / (shifted * shifted)).sqrt()
        }
        CurveFamily::MsYz => {
            // Exact inversion of the q = 0.001 strength through the quadratic
            // in cos θ; the published decimal constants round this inversion.
            let q = 0.001;
            let r2 = std::f64::consts::SQRT_2;
            let quad = q * r2;
            let lin = 8.0 * s - (1.0 - q) * r2 + q * (2.0 - r2);
            let constant = (1.0 - q) * (2.0 - r2);
            let cos_theta = (-lin + (lin * lin + 4.0 * quad * constant).sqrt()) / (2.0 * quad);
            let u = 4.0 * cos_theta;
            (32.0 - u * u).sqrt()
        }
        // The rounded 0.707107 is the quoted constant kept verbatim: this
        // companion reproduces the printed curve, not an exact 1/√2 form.
        #[allow(clippy::approx_constant)]
        CurveFamily::WClassOne => {
            let sq = x * x;
            let j = 1.0 - 7.28 * sq + 21.2496 * sq * sq - 29.12 * sq.powi(3) + 16.0 * sq.powi(4);
            4.0 * 0.707107 * (1.0 + 3.64 * sq - 4.0 * sq * sq + j.sqrt()).sqrt()
        }
        CurveFamily::WClassTwo => (16.0 + 33.1546 / s.max(1e-12)).sqrt(),
    }
}

// ---------------------------------------------------------------------------
// Small real-vector helpers
// ---------------------------------------------------------------------------

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn add3(x: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2]]
}

fn sub3(x: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2]]
}

/// Replaces `target` with the normalized gradient, keeping the previous
/// direction when the gradient vanishes.
fn renorm_into(target: &mut [f64; 3], gradient: [f64; 3]) {
    let n = norm3(gradient);
    if n > SEESAW_FLAT {
        *target = [gradient[0] / n, gradient[1] / n, gradient[2] / n];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_density, seeded_rng};
    use crate::states::canonical_to_state;

    const TIGHT: f64 = 1e-9;
    const SEESAW_MATCH: f64 = 1e-5;

    fn ghz_density() -> DensityMatrix {
        canonical_to_state(&Canonical3Q::ghz()).unwrap()
    }

    fn ms_density(theta: f64) -> DensityMatrix {
        canonical_to_state(&Canonical3Q::ms(theta).unwrap()).unwrap()
    }

    fn phi_plus() -> DensityMatrix {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        DensityMatrix::from_state_vector(&[h, C64::ZERO, C64::ZERO, h]).unwrap()
    }

    #[test]
    fn aligned_setting_cancels_exactly() {
        let z = [0.0, 0.0, 1.0];
        let s = SvetlichnySetting::new(z, z, z, z, z, z).unwrap();
        assert_eq!(svetlichny_operator(&s).max_abs(), 0.0);
    }

    #[test]
    fn non_unit_direction_is_rejected() {
        let z = [0.0, 0.0, 1.0];
        let bad = [0.0, 0.0, 0.9];
        assert!(matches!(
            SvetlichnySetting::new(z, z, z, bad, z, z),
            Err(Error::NotUnit { .. })
        ));
    }

    #[test]
    fn ghz_optimal_setting_reaches_the_algebraic_maximum() {
        let value = svetlichny_expectation(&ghz_density(), &SvetlichnySetting::ghz_optimal())
            .unwrap();
        assert!((value - 4.0 * std::f64::consts::SQRT_2).abs() < TIGHT);
    }

    #[test]
    fn operator_is_hermitian_with_norm_at_most_four_root_two() {
        let mut rng = seeded_rng(11);
        for _ in 0..25 {
            let op = svetlichny_operator(&SvetlichnySetting::random(&mut rng));
            assert!(op.hermiticity_residual() < tol::HERMITICITY);
            let eigs = hermitian_eigenvalues(&op).unwrap();
            let norm = eigs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
            assert!(norm <= 4.0 * std::f64::consts::SQRT_2 + 1e-9, "norm {norm}");
        }
    }

    #[test]
    fn maximally_mixed_state_has_zero_expectation_for_every_setting() {
        let rho = DensityMatrix::maximally_mixed(8);
        let mut rng = seeded_rng(12);
        for _ in 0..10 {
            let v = svetlichny_expectation(&rho, &SvetlichnySetting::random(&mut rng)).unwrap();
            assert!(v.abs() < TIGHT);
        }
    }

    #[test]
    fn tensor_contraction_matches_operator_trace() {
        let mut rng = seeded_rng(13);
        for seed in 0..10u64 {
            let rho = random_density(8, 40 + seed).unwrap();
            let e = correlation_tensor(&rho).unwrap();
            let s = SvetlichnySetting::random(&mut rng);
            let via_trace = svetlichny_expectation(&rho, &s).unwrap();
            let via_tensor = svetlichny_value(&e, &s);
            assert!((via_trace - via_tensor).abs() < 1e-10);
        }
    }

    #[test]
    fn seesaw_recovers_the_ghz_maximum() {
        let (value, setting) = svetlichny_max(&ghz_density()).unwrap();
        assert!((value - 4.0 * std::f64::consts::SQRT_2).abs() < 1e-6, "value {value}");
        let check = svetlichny_expectation(&ghz_density(), &setting).unwrap();
        assert!((check - value).abs() < TIGHT);
    }

    #[test]
    fn seesaw_matches_the_maximal_slice_closed_form() {
        for i in 0..20 {
            let theta = 0.05 + i as f64 * (1.52 - 0.05) / 19.0;
            let (value, _) = svetlichny_max(&ms_density(theta)).unwrap();
            let closed = 4.0 * (2.0 - theta.cos().powi(2)).sqrt();
            assert!((value - closed).abs() < 1e-4, "theta {theta}: {value} vs {closed}");
        }
        let (value, _) = svetlichny_max(&ms_density(1.2)).unwrap();
        let closed = 4.0 * (2.0 - 1.2f64.cos().powi(2)).sqrt();
        assert!((value - closed).abs() < SEESAW_MATCH);
    }

    #[test]
    fn product_state_stays_at_the_hybrid_bound() {
        let mut psi = [C64::ZERO; 8];
        psi[0] = C64::ONE;
        let rho = DensityMatrix::from_state_vector(&psi).unwrap();
        let (value, _) = svetlichny_max(&rho).unwrap();
        assert!(value <= 4.0 + 1e-6, "value {value}");
        assert!(value >= 4.0 - 1e-6, "value {value}");
    }

    #[test]
    fn seesaw_values_for_the_w_class_families() {
        let one_half = canonical_to_state(&Canonical3Q::w_class_one(0.5).unwrap()).unwrap();
        let (v1, _) = svetlichny_max(&one_half).unwrap();
        assert!((v1 - 4.053014780546433).abs() < SEESAW_MATCH, "got {v1}");

        let one_peak = canonical_to_state(&Canonical3Q::w_class_one(0.675).unwrap()).unwrap();
        let (v2, _) = svetlichny_max(&one_peak).unwrap();
        assert!((v2 - 4.170833009543506).abs() < SEESAW_MATCH, "got {v2}");

        // Type-II states factor across the AB|C cut, so the maximum collapses
        // to four times the top singular value of the two-qubit correlations.
        let two = Canonical3Q::w_class_two(0.4).unwrap();
        let rho_ab = reduce_to_ab(&two).unwrap();
        let t = crate::states::correlation_matrix(&rho_ab).unwrap();
        let rows: Vec<Vec<f64>> = t.iter().map(|r| r.to_vec()).collect();
        let s1 = singular_values(&ComplexMatrix::from_real_rows(&rows)).unwrap()[0];
        let (v3, _) = svetlichny_max(&canonical_to_state(&two).unwrap()).unwrap();
        assert!((v3 - 4.0 * s1).abs() < SEESAW_MATCH, "got {v3} vs {}", 4.0 * s1);
    }

    #[test]
    fn seesaw_never_beats_the_singular_value_cap() {
        let mut rng = seeded_rng(14);
        for _ in 0..12 {
            let rho = canonical_to_state(&sampling::canonical(&mut rng)).unwrap();
            let (value, _) = svetlichny_max_with(
                &rho,
                SvetlichnyOptions { starts: 24, ..SvetlichnyOptions::default() },
            )
            .unwrap();
            let cap = svetlichny_upper_bound(&rho).unwrap();
            assert!(value <= cap + 1e-6, "{value} vs cap {cap}");
        }
    }

    #[test]
    fn m_matrix_of_ghz_has_the_known_rows_and_spectrum() {
        let m = m_matrix(&ghz_density()).unwrap();
        // Row x: +1 at column (x, x); −1 at (y, y).
        assert!((m[0][0] - 1.0).abs() < TIGHT);
        assert!((m[0][4] + 1.0).abs() < TIGHT);
        // Row y: −1 at (x, y) and (y, x).
        assert!((m[1][1] + 1.0).abs() < TIGHT);
        assert!((m[1][3] + 1.0).abs() < TIGHT);
        // Row z vanishes, and nothing else survives.
        let named = [(0usize, 0usize), (0, 4), (1, 1), (1, 3)];
        for (r, row) in m.iter().enumerate() {
            for (c, &entry) in row.iter().enumerate() {
                if !named.contains(&(r, c)) {
                    assert!(entry.abs() < TIGHT, "({r},{c}) = {entry}");
                }
            }
        }
        let sv = m_singular_values(&m).unwrap();
        assert!((sv[0] - std::f64::consts::SQRT_2).abs() < TIGHT);
        assert!((sv[1] - std::f64::consts::SQRT_2).abs() < TIGHT);
        assert!(sv[2].abs() < TIGHT);
        let bound = svetlichny_upper_bound(&ghz_density()).unwrap();
        assert!((bound - 4.0 * std::f64::consts::SQRT_2).abs() < TIGHT);
    }

    #[test]
    fn m_matrix_of_a_product_state_has_one_entry() {
        let mut psi = [C64::ZERO; 8];
        psi[0] = C64::ONE;
        let rho = DensityMatrix::from_state_vector(&psi).unwrap();
        let m = m_matrix(&rho).unwrap();
        for (r, row) in m.iter().enumerate() {
            for (c, &entry) in row.iter().enumerate() {
                let expected = if (r, c) == (2, 8) { 1.0 } else { 0.0 };
                assert!((entry - expected).abs() < TIGHT, "({r},{c}) = {entry}");
            }
        }
        assert!((svetlichny_upper_bound(&rho).unwrap() - 4.0).abs() < TIGHT);
    }

    #[test]
    fn m_matrix_of_the_maximally_mixed_state_vanishes() {
        let m = m_matrix(&DensityMatrix::maximally_mixed(8)).unwrap();
        assert!(m.iter().flatten().all(|&x| x.abs() < TIGHT));
    }

    #[test]
    fn every_role_assignment_keeps_all_27_correlations() {
        let rho = random_density(8, 77).unwrap();
        let e = correlation_tensor(&rho).unwrap();
        let mut want: Vec<i64> = e
            .iter()
            .flatten()
            .flatten()
            .map(|&x| (x * 1e12).round() as i64)
            .collect();
        want.sort_unstable();
        for roles in QubitRoles::all() {
            let m = m_matrix_with(&rho, roles).unwrap();
            let mut got: Vec<i64> = m
                .iter()
                .flatten()
                .map(|&x| (x * 1e12).round() as i64)
                .collect();
            got.sort_unstable();
            assert_eq!(got, want, "{roles:?}");
        }
    }

    #[test]
    fn type_two_top_singular_value_follows_its_closed_form() {
        for &l0 in &[0.1, 0.4, 0.7] {
            let rho = canonical_to_state(&Canonical3Q::w_class_two(l0).unwrap()).unwrap();
            let m = m_matrix(&rho).unwrap();
            let top = m_singular_values(&m).unwrap()[0];
            // The AB|C product structure makes σ_max the Frobenius norm of the
            // two-qubit correlation matrix: √(1 + 8λ₀²(0.51 − λ₀²)).
            let closed = (1.0 + 8.0 * l0 * l0 * (0.51 - l0 * l0)).sqrt();
            assert!((top - closed).abs() < TIGHT, "λ₀ = {l0}: {top} vs {closed}");
        }
        let rho = canonical_to_state(&Canonical3Q::w_class_two(0.1).unwrap()).unwrap();
        let top = m_singular_values(&m_matrix(&rho).unwrap()).unwrap()[0];
        assert!((top - 1.0198039027185569).abs() < 1e-9);
    }

    #[test]
    fn type_one_top_singular_values_match_the_frozen_oracle() {
        for &(l0, expected) in &[(0.1, 1.035374), (0.5, 1.523155), (0.7, 1.626776)] {
            let rho = canonical_to_state(&Canonical3Q::w_class_one(l0).unwrap()).unwrap();
            let top = m_singular_values(&m_matrix(&rho).unwrap()).unwrap()[0];
            assert!((top - expected).abs() < 5e-6, "λ₀ = {l0}: {top}");
        }
    }

    #[test]
    fn concurrence_landmarks() {
        assert!((concurrence(&phi_plus()).unwrap() - 1.0).abs() < TIGHT);
        assert!(concurrence(&DensityMatrix::maximally_mixed(4)).unwrap() < TIGHT);
        let ms = reduce_to_ab(&Canonical3Q::ms(std::f64::consts::FRAC_PI_3).unwrap()).unwrap();
        assert!((concurrence(&ms).unwrap() - 0.5).abs() < TIGHT);
    }

    #[test]
    fn concurrence_satisfies_the_negativity_sandwich() {
        for seed in 0..50u64 {
            let rho = random_density(4, 500 + seed).unwrap();
            let c = concurrence(&rho).unwrap();
            let n = negativity(&rho).unwrap();
            let lower = ((1.0 - c) * (1.0 - c) + c * c).sqrt() - (1.0 - c);
            assert!(n >= lower - 1e-9, "negativity {n} below {lower}");
            let cap = -n + std::f64::consts::SQRT_2 * (n * n + n).sqrt();
            assert!(c <= cap + 1e-9, "concurrence {c} above {cap}");
        }
    }

    #[test]
    fn tangle_landmarks() {
        assert!((tangle(&Canonical3Q::ghz()).unwrap() - 1.0).abs() < 1e-10);
        let theta = std::f64::consts::FRAC_PI_3;
        let ms = tangle(&Canonical3Q::ms(theta).unwrap()).unwrap();
        assert!((ms - theta.sin().powi(2)).abs() < TIGHT);
        assert!(tangle(&Canonical3Q::w_class_one(0.5).unwrap()).unwrap() < 1e-7);
        assert!(tangle(&Canonical3Q::w_class_two(0.4).unwrap()).unwrap() < 1e-7);
    }

    #[test]
    fn tangle_is_monotone_safe_on_random_canonical_states() {
        let mut rng = seeded_rng(15);
        for _ in 0..50 {
            let c3 = sampling::canonical(&mut rng);
            let tau = tangle(&c3).unwrap();
            assert!((0.0..=1.0).contains(&tau));
        }
    }

    #[test]
    fn conditioned_fidelity_reaches_one_for_maximal_tangle() {
        let ghz_ab = reduce_to_ab(&Canonical3Q::ghz()).unwrap();
        let exact = conditioned_fidelity_exact(concurrence(&ghz_ab).unwrap(), 1.0);
        assert!((exact - 1.0).abs() < TIGHT);
        let upper = conditioned_fidelity_upper(&ghz_ab, 1.0).unwrap();
        assert!((upper - 1.0).abs() < TIGHT);
    }

    #[test]
    fn conditioned_fidelity_exact_stays_below_its_upper_bound() {
        let theta = std::f64::consts::FRAC_PI_3;
        let c3 = Canonical3Q::ms(theta).unwrap();
        let rho_ab = reduce_to_ab(&c3).unwrap();
        let tau = tangle(&c3).unwrap();
        let exact = conditioned_fidelity_exact(concurrence(&rho_ab).unwrap(), tau);
        assert!((exact - 1.0).abs() < TIGHT, "partial tangle of the slice family is 1");
        let upper = conditioned_fidelity_upper(&rho_ab, tau).unwrap();
        assert!(exact <= upper + TIGHT);

        let mut rng = seeded_rng(16);
        for _ in 0..40 {
            let c3 = sampling::canonical(&mut rng);
            let rho_ab = reduce_to_ab(&c3).unwrap();
            let tau = tangle(&c3).unwrap();
            let Ok(upper) = conditioned_fidelity_upper(&rho_ab, tau) else {
                continue;
            };
            let exact = conditioned_fidelity_exact(concurrence(&rho_ab).unwrap(), tau);
            assert!(exact <= upper + 1e-9, "{exact} vs {upper}");
        }
    }

    #[test]
    fn degenerate_separable_zero_tangle_input_is_rejected() {
        let mut psi = [C64::ZERO; 4];
        psi[0] = C64::ONE;
        let rho = DensityMatrix::from_state_vector(&psi).unwrap();
        assert!(matches!(
            conditioned_fidelity_upper(&rho, 0.0),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn non_conditioned_fidelity_landmarks() {
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!((f_nc_lower(&mixed).unwrap() - 0.5).abs() < TIGHT);
        assert!((f_nc_lower(&phi_plus()).unwrap() - 5.0 / 6.0).abs() < TIGHT);
        let ms = reduce_to_ab(&Canonical3Q::ms(std::f64::consts::FRAC_PI_3).unwrap()).unwrap();
        assert!((f_nc_lower(&ms).unwrap() - (3.0 + 1.25) / 6.0).abs() < TIGHT);
    }

    #[test]
    fn power_bounds_for_ghz() {
        let report = power_bounds(&Canonical3Q::ghz()).unwrap();
        assert!((report.tangle - 1.0).abs() < 1e-10);
        assert!(report.negativity < TIGHT);
        assert!((report.m - 1.0).abs() < TIGHT);
        assert!((report.l - 1.0).abs() < 1e-10);
        assert!((report.power_upper - 1.0 / 3.0).abs() < TIGHT);
        assert!(report.window.is_none());
        assert!(!report.chsh_violated);
        assert!(report.strength_cap.is_none() && report.power_strength_cap.is_none());
    }

    #[test]
    fn power_bounds_for_the_quarter_pi_slice() {
        let report = power_bounds(&Canonical3Q::ms(std::f64::consts::FRAC_PI_4).unwrap()).unwrap();
        assert!((report.m - 1.5).abs() < TIGHT);
        assert!((report.l - 1.216845335437476).abs() < TIGHT);
        assert!((report.power_upper - 0.284369042605184).abs() < TIGHT);
        let (lo, hi) = report.window.expect("window should open when CHSH is violated");
        assert!((lo - 1.0).abs() < TIGHT);
        assert!((hi - (1.0 + 2.0 * report.l.sqrt())).abs() < TIGHT);
        assert!(report.chsh_violated);
        let cap = report.strength_cap.unwrap();
        assert!(report.s_nl < cap, "strength {} should sit under the cap {cap}", report.s_nl);
        assert!((report.l - l_quantity(report.tangle, report.negativity)).abs() < 1e-12);
    }

    #[test]
    fn xy_curve_matches_its_closed_forms() {
        let grid = default_grid(CurveFamily::MsXy, 9).unwrap();
        let rows = family_curves(CurveFamily::MsXy, &grid).unwrap();
        for (row, &theta) in rows.iter().zip(grid.iter()) {
            assert!(row.s_value > 0.1 && row.s_value <= 1.2 + 1e-9, "S = {}", row.s_value);
            assert!((row.s_value - row.s_closed).abs() < 1e-10);
            let direct = 4.0 * (2.0 - theta.cos().powi(2)).sqrt();
            assert!((row.sv_closed - direct).abs() < 1e-9, "relation drift at {theta}");
            assert!(row.sv_seesaw > 4.0, "Svetlichny value at {theta}");
            assert!(row.sv_seesaw <= row.sv_bound + 1e-6);
            assert!(row.difference < 1e-4);
        }
    }

    #[test]
    fn yz_curve_matches_its_closed_forms() {
        let grid = default_grid(CurveFamily::MsYz, 9).unwrap();
        let rows = family_curves(CurveFamily::MsYz, &grid).unwrap();
        for (row, &theta) in rows.iter().zip(grid.iter()) {
            assert!(row.s_value > 0.25 && row.s_value <= 0.7 + 1e-9, "S = {}", row.s_value);
            assert!((row.s_value - row.s_closed).abs() < 1e-10);
            let direct = 4.0 * (2.0 - theta.cos().powi(2)).sqrt();
            assert!((row.sv_closed - direct).abs() < 1e-9, "inversion drift at {theta}");
            assert!(row.sv_seesaw > 4.0);
        }
    }

    #[test]
    fn type_one_curve_tracks_the_published_strength_window() {
        let grid = default_grid(CurveFamily::WClassOne, 9).unwrap();
        let rows = family_curves(CurveFamily::WClassOne, &grid).unwrap();
        for row in &rows {
            assert!(row.s_value >= 0.0 && row.s_value <= 0.06, "S = {}", row.s_value);
            assert!((row.s_value - row.s_closed).abs() < 2e-6);
            // The published singular-value formula collapses to a constant;
            // the computed cap and the see-saw value both exceed it.
            assert!((row.sv_closed - 4.0).abs() < 1e-5);
            assert!(row.sv_bound > 4.0);
            assert!(row.sv_seesaw <= row.sv_bound + 1e-6);
        }
        assert!(rows.iter().any(|r| r.sv_seesaw > 4.0 + 1e-3));
    }

    #[test]
    fn type_two_curve_matches_the_frozen_strengths() {
        let rows = family_curves(CurveFamily::WClassTwo, &[0.1, 0.5, 0.7]).unwrap();
        let expected = [1.1807749621930796, 0.1219456106, 0.7710570901];
        for (row, want) in rows.iter().zip(expected.iter()) {
            assert!((row.s_value - want).abs() < 1e-8, "{} vs {want}", row.s_value);
            assert!((row.s_value - row.s_closed).abs() < 1e-6);
            assert!(row.sv_seesaw <= row.sv_bound + 1e-6);
        }
    }

    #[test]
    fn out_of_interval_grid_points_are_rejected() {
        assert!(matches!(
            family_curves(CurveFamily::WClassTwo, &[0.8]),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            family_curves(CurveFamily::MsXy, &[0.0]),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(default_grid(CurveFamily::MsXy, 1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn curve_family_tags_round_trip() {
        for family in [
            CurveFamily::MsXy,
            CurveFamily::MsYz,
            CurveFamily::WClassOne,
            CurveFamily::WClassTwo,
        ] {
            assert_eq!(CurveFamily::parse(family.label()).unwrap(), family);
        }
        assert!(CurveFamily::parse("nope").is_err());
    }
}
