//! Numerical toolkit for quantifying the nonlocality of small quantum states.
//!
//! The crate covers the full two-qubit CHSH pipeline — correlation matrices,
//! the Horodecki quantity M(ρ), Bell operators, entanglement witnesses, the
//! XOR-game strength measures S_NL and S_NL^New — plus the tripartite layer:
//! Svetlichny operators and singular-value bounds, tangle/concurrence, and
//! controlled-teleportation power bounds.
//!
//! Everything is dense, complex, and tiny (nothing larger than 8×8 or 3×9),
//! so the linear algebra is self-contained: a cyclic Jacobi eigensolver with
//! an explicit residual contract rather than a BLAS dependency.

// Index loops over fixed 3×3(×3) tensors keep the subscripts aligned with
// the formulas they implement; iterator rewrites obscure that.
#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod bell;
pub mod compat;
pub mod game;
pub mod linalg;
pub mod sampling;
pub mod states;
pub mod strength;
pub mod tripartite;
pub mod witness;

pub use analysis::{analyze, AnalysisOptions, AnalysisReport};
pub use bell::{MeasurementSetting, Plane, SignPattern};
pub use linalg::{ComplexMatrix, DensityMatrix, C64};
pub use states::{Canonical3Q, NamedFamily, PauliDiagonalForm, StateSpec};
pub use strength::StrengthReport;
pub use tripartite::{CurveFamily, PowerReport, QubitRoles, SvetlichnySetting};
pub use witness::WitnessKind;

/// Central tolerance constants. Each is named for the contract it guards so
/// call sites and tests agree on one number per concern.
pub mod tol {
    /// Max |m_ij − conj(m_ji)| for a matrix to count as Hermitian.
    pub const HERMITICITY: f64 = 1e-12;
    /// Eigendecomposition residual contract: ‖HV − VΛ‖_max.
    pub const EIGEN_RESIDUAL: f64 = 1e-10;
    /// Density-matrix validation (trace deviation and negative-eigenvalue slack).
    pub const DENSITY: f64 = 1e-10;
    /// Unit-norm slack for measurement directions.
    pub const UNIT_NORM: f64 = 1e-10;
    /// Largest imaginary residue tolerated when a trace must be real.
    pub const IMAG_RESIDUE: f64 = 1e-10;
    /// Witness detection threshold: Tr[Wρ] < −DETECTION certifies entanglement;
    /// exact zero is non-detection.
    pub const DETECTION: f64 = 1e-9;
    /// Strict CHSH-violation predicate: M > 1 + CHSH_STRICT.
    pub const CHSH_STRICT: f64 = 1e-12;
    /// Entanglement gate for the K quantity: negativity must exceed this.
    pub const ENTANGLEMENT_GATE: f64 = 1e-12;
    /// Agreement required between algebraically identical formulas
    /// (game identity, witness form of S_NL, plane-operator simplification).
    pub const DUAL_FORM: f64 = 1e-12;
    /// Multi-start optimizers must land within this of the closed-form optimum.
    pub const OPTIMIZER: f64 = 1e-6;
}

/// Errors for every fallible operation in the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (got {got})")]
    Dimension { context: &'static str, got: String },
    #[error("matrix is not Hermitian: max asymmetry {residual:.3e}")]
    NotHermitian { residual: f64 },
    #[error("not a density matrix: {reason}")]
    NotDensity { reason: String },
    #[error("measurement direction is not unit norm: |v| = {norm}")]
    NotUnit { norm: f64 },
    #[error("parameter out of range: {context} (got {value})")]
    OutOfRange { context: &'static str, value: f64 },
    #[error("state is separable (negativity {negativity:.3e}); K is undefined")]
    Separable { negativity: f64 },
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("measure inconclusive: K = {k:.6} ≤ 0, no q yields a positive S_NL^New")]
    Inconclusive { k: f64 },
    #[error("state specification is invalid: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
