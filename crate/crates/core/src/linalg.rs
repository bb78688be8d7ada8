//! Dense complex linear algebra for matrices up to 9 on a side.
//!
//! Eigendecomposition uses cyclic Jacobi with complex rotations; the exposed
//! contract is the residual bound ‖HV − VΛ‖_max ≤ `tol::EIGEN_RESIDUAL`, not
//! the method. Singular values come from the smaller Gram matrix, so the
//! independent cross-check in the tests goes through the Jordan–Wielandt
//! embedding instead.

use crate::{tol, Error, Result};
use num_complex::Complex64;

pub type C64 = Complex64;

/// Hard cap on any axis; every object in scope is 2×2 … 8×8 or 3×9.
pub const MAX_DIM: usize = 9;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows <= MAX_DIM && cols <= MAX_DIM, "matrix axis exceeds {MAX_DIM}");
        Self { rows, cols, data: vec![C64::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::ONE;
        }
        m
    }

    /// Build from nested rows of complex entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let complex: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&complex)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (v, w) in m.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_re(-1.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    m[(i, j)] += a * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// max_{ij} |a_ij − b_ij| over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// max_{ij} |m_ij − conj(m_ji)|; zero for exactly Hermitian matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker (tensor) product; dimensions multiply.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let v = a[(i, j)];
            if v == C64::ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    m[(i * b.rows + k, j * b.cols + l)] = v * b[(k, l)];
                }
            }
        }
    }
    m
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::ZERO, C64::ONE],
        vec![C64::ONE, C64::ZERO],
    ])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::ZERO, C64::new(0.0, -1.0)],
        vec![C64::new(0.0, 1.0), C64::ZERO],
    ])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::ONE, C64::ZERO],
        vec![C64::ZERO, -C64::ONE],
    ])
}

/// σ_x, σ_y, σ_z by axis index 0, 1, 2.
pub fn pauli(axis: usize) -> ComplexMatrix {
    match axis {
        0 => pauli_x(),
        1 => pauli_y(),
        2 => pauli_z(),
        _ => panic!("Pauli axis must be 0, 1, or 2"),
    }
}

/// Eigenvalues (ascending) and eigenvectors (matching columns) of a Hermitian
/// matrix via cyclic Jacobi. Satisfies ‖HV − VΛ‖_max ≤ `tol::EIGEN_RESIDUAL`.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !h.is_square() {
        return Err(Error::Dimension {
            context: "hermitian_eigen needs a square matrix",
            got: format!("{}x{}", h.rows, h.cols),
        });
    }
    let residual = h.hermiticity_residual();
    if residual > tol::HERMITICITY {
        return Err(Error::NotHermitian { residual });
    }

    let n = h.rows;
    // Symmetrize exactly so rounding in the input cannot bias the iteration.
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (h[(i, j)] + h[(j, i)].conj()).scale(0.5);
        }
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs().max(1.0);
    let stop = scale * 1e-15;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = a[(p, q)];
                let mag = gamma.norm();
                if mag <= stop * 1e-2 {
                    continue;
                }
                let phase = gamma / mag; // e^{iφ}
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                // Zeroing angle for the 2×2 block [[α, γ], [γ̄, β]] under
                // G = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]]: tan 2θ = 2|γ|/(β − α).
                let theta = 0.5 * (2.0 * mag).atan2(beta - alpha);
                let c = theta.cos();
                let s = theta.sin();
                let se_pos = phase.scale(s); // s·e^{iφ}
                let se_neg = se_pos.conj(); // s·e^{−iφ}

                // Rows p, q of A ← G† A.
                for r in 0..n {
                    let ap = a[(p, r)];
                    let aq = a[(q, r)];
                    a[(p, r)] = ap.scale(c) - se_pos * aq;
                    a[(q, r)] = se_neg * ap + aq.scale(c);
                }
                // Columns p, q of A ← A G, and accumulate V ← V G.
                for r in 0..n {
                    let ap = a[(r, p)];
                    let aq = a[(r, q)];
                    a[(r, p)] = ap.scale(c) - se_neg * aq;
                    a[(r, q)] = se_pos * ap + aq.scale(c);
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = vp.scale(c) - se_neg * vq;
                    v[(r, q)] = se_pos * vp + vq.scale(c);
                }
                a[(p, q)] = C64::ZERO;
                a[(q, p)] = C64::ZERO;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new_col)] = v[(r, old_col)];
        }
    }
    Ok((values, vectors))
}

/// Ascending real eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(h).map(|(values, _)| values)
}

/// Singular values in descending order, computed from the smaller of the two
/// Gram matrices M†M / MM†.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = if m.rows <= m.cols {
        m.matmul(&m.adjoint())
    } else {
        m.adjoint().matmul(m)
    };
    let eigs = hermitian_eigenvalues(&gram)?;
    let mut sv: Vec<f64> = eigs.into_iter().map(|e| e.max(0.0).sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Partial transpose over the second qubit of a 4×4 two-qubit matrix:
/// transposes each 2×2 block of the block partition. An involution.
pub fn partial_transpose_b(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.rows != 4 || rho.cols != 4 {
        return Err(Error::Dimension {
            context: "partial_transpose_B needs a 4x4 matrix",
            got: format!("{}x{}", rho.rows, rho.cols),
        });
    }
    let mut out = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    // ρ^TB[(a,b),(a',b')] = ρ[(a,b'),(a',b)]
                    out[(2 * a + b, 2 * a2 + b2)] = rho[(2 * a + b2, 2 * a2 + b)];
                }
            }
        }
    }
    Ok(out)
}

/// Trace out one qubit of an n-qubit density matrix (n = 2 or 3), keeping the
/// remaining qubits in their original order.
pub fn trace_out(rho: &ComplexMatrix, qubit_count: usize, traced: usize) -> Result<ComplexMatrix> {
    let dim = 1usize << qubit_count;
    if rho.rows != dim || rho.cols != dim {
        return Err(Error::Dimension {
            context: "trace_out dimension must be 2^qubit_count",
            got: format!("{}x{} for {} qubits", rho.rows, rho.cols, qubit_count),
        });
    }
    if traced >= qubit_count {
        return Err(Error::Dimension {
            context: "traced qubit index out of range",
            got: traced.to_string(),
        });
    }
    let keep: Vec<usize> = (0..qubit_count).filter(|&q| q != traced).collect();
    let out_dim = dim / 2;
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    // Qubit q occupies bit (qubit_count − 1 − q) of the basis index.
    let bit_of = |q: usize| qubit_count - 1 - q;
    for row_kept in 0..out_dim {
        for col_kept in 0..out_dim {
            let mut acc = C64::ZERO;
            for t in 0..2usize {
                let mut row = t << bit_of(traced);
                let mut col = t << bit_of(traced);
                for (pos, &q) in keep.iter().enumerate() {
                    let kept_bit_row = (row_kept >> (keep.len() - 1 - pos)) & 1;
                    let kept_bit_col = (col_kept >> (keep.len() - 1 - pos)) & 1;
                    row |= kept_bit_row << bit_of(q);
                    col |= kept_bit_col << bit_of(q);
                }
                acc += rho[(row, col)];
            }
            out[(row_kept, col_kept)] = acc;
        }
    }
    Ok(out)
}

/// Trace out one qubit of a three-qubit (8×8) density matrix.
pub fn partial_trace(rho: &ComplexMatrix, traced: usize) -> Result<ComplexMatrix> {
    trace_out(rho, 3, traced)
}

/// Diagnostics from density-matrix validation.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DensityDiagnostics {
    pub hermiticity_residual: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub passes: bool,
}

/// Check Hermiticity, unit trace, and positivity against `tolerance`.
pub fn validate_density(rho: &ComplexMatrix, tolerance: f64) -> Result<DensityDiagnostics> {
    if !rho.is_square() {
        return Err(Error::Dimension {
            context: "density matrix must be square",
            got: format!("{}x{}", rho.rows, rho.cols),
        });
    }
    let hermiticity_residual = rho.hermiticity_residual();
    let trace_deviation = (rho.trace() - C64::ONE).norm();
    // Eigensolve the symmetrized matrix so a residual just under the
    // Hermiticity gate cannot poison the positivity check.
    let n = rho.rows;
    let mut sym = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            sym[(i, j)] = (rho[(i, j)] + rho[(j, i)].conj()).scale(0.5);
        }
    }
    let eigs = hermitian_eigenvalues(&sym)?;
    let min_eigenvalue = eigs.first().copied().unwrap_or(0.0);
    let passes = hermiticity_residual <= tolerance
        && trace_deviation <= tolerance
        && min_eigenvalue >= -tolerance;
    Ok(DensityDiagnostics { hermiticity_residual, trace_deviation, min_eigenvalue, passes })
}

/// A validated density matrix (4×4 two-qubit or 8×8 three-qubit).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap. Rejects non-square, wrong-size, non-Hermitian,
    /// traceless, or negative matrices, reporting the offending diagnostic.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !(matrix.rows == 4 || matrix.rows == 8) || !matrix.is_square() {
            return Err(Error::Dimension {
                context: "density matrices here are 4x4 or 8x8",
                got: format!("{}x{}", matrix.rows, matrix.cols),
            });
        }
        let diag = validate_density(&matrix, tol::DENSITY)?;
        if !diag.passes {
            return Err(Error::NotDensity {
                reason: format!(
                    "hermiticity residual {:.3e}, trace deviation {:.3e}, min eigenvalue {:.6e}",
                    diag.hermiticity_residual, diag.trace_deviation, diag.min_eigenvalue
                ),
            });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn qubits(&self) -> usize {
        if self.dim() == 4 {
            2
        } else {
            3
        }
    }

    /// I/4 or I/8.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64);
        Self::new(m).expect("maximally mixed state is always valid")
    }

    /// Rank-1 projector |ψ⟩⟨ψ| from a normalized state vector.
    pub fn from_state_vector(psi: &[C64]) -> Result<Self> {
        let dim = psi.len();
        let norm2: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > tol::DENSITY {
            return Err(Error::NotDensity {
                reason: format!("state vector norm² = {norm2}, expected 1"),
            });
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        Self::new(m)
    }
}
