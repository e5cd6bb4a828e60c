use thiserror::Error;

/// Errors raised by frame construction, quantization and the bound experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a frame: smallest frame-operator eigenvalue is {min_eigenvalue:e}")]
    NotAFrame { min_eigenvalue: f64 },

    #[error("enumeration budget exceeded ({0}); use a smaller coefficient cap")]
    EnumerationBudget(String),

    #[error("quantizer contract violated: {0}")]
    ContractViolation(String),

    #[error("l-infinity representation did not converge (level {level}, best residual {best_residual:e})")]
    NonConvergence { level: f64, best_residual: f64 },

    #[error("point set is empty")]
    EmptySet,

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
