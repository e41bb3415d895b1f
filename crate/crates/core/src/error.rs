use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Rejected at `SystemParams` construction (zero ring size, non-finite
    /// reals, negative coupling).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation argument violated its precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The dot level lies outside the ring band, so no on-shell rate exists.
    #[error("out of band: {0}")]
    OutOfBand(String),

    /// An iteration exhausted its budget without reaching tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// Internal numerical consistency check failed.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A caller-supplied value broke a structural contract (e.g. a
    /// non-Hermitian matrix handed to the eigensolver).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Filesystem trouble while reading or writing run artifacts.
    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
