use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows} rows, {cols} columns)")]
    NotSquare { rows: usize, cols: usize },

    #[error("basis label describes dimension {label_dim}, matrix has dimension {dim}")]
    BasisMismatch { dim: usize, label_dim: usize },

    #[error("matrix is not Hermitian: relative defect {defect:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("non-finite values in {0}")]
    NonFinite(&'static str),

    #[error("{what} did not converge (residual {residual:.3e})")]
    NoConvergence { what: &'static str, residual: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown displacement mode `{0}`")]
    UnknownDisplacementMode(String),

    #[error("inconsistent coupling: eta = {eta} but q*(a/2)*A0 = {derived}")]
    InconsistentCoupling { eta: f64, derived: f64 },

    #[error("sampled profile covers [{min}, {max}] but the integral needs [{x_l}, {x_r}]")]
    ProfileCoverage { min: f64, max: f64, x_l: f64, x_r: f64 },

    #[error("Hilbert space dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("no two-well structure: localized positions differ by {separation:.3e}, grid spacing is {spacing:.3e}")]
    NoTwoWellStructure { separation: f64, spacing: f64 },

    #[error("two-level validity ratio {ratio:.4} is below the threshold {threshold}")]
    LowValidity {
        ratio: f64,
        threshold: f64,
        result: Box<crate::twolevel::ReductionResult>,
    },

    #[error("cutoff N = {cutoff} did not converge (residual {residual:.3e} > {tol:.1e})")]
    CutoffNotConverged { cutoff: usize, residual: f64, tol: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
