use gqrm_core::Error as CoreError;
use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const VALIDITY: i32 = 3;
    pub const SOLVER: i32 = 4;
    pub const CONVERGENCE: i32 = 5;
    pub const GAUGE_CHECK: i32 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => exit::CONFIG,
            Self::Solver(_) => exit::SOLVER,
            Self::Io { .. } => exit::IO,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { .. }
            | CoreError::UnknownDisplacementMode(_)
            | CoreError::InconsistentCoupling { .. }
            | CoreError::ProfileCoverage { .. }
            | CoreError::DimensionCap { .. }
            | CoreError::BasisMismatch { .. }
            | CoreError::NotSquare { .. } => Self::Config(e.to_string()),
            other => Self::Solver(other.to_string()),
        }
    }
}
