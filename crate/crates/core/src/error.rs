use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("frequency {omega} outside attained band [{lo}, {hi})")]
    OutOfBand { omega: f64, lo: f64, hi: f64 },

    /// The request lies outside the domain where double precision can
    /// deliver the promised accuracy.
    #[error("precision: {0}")]
    Precision(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The resolution index cannot keep the requested band flat.
    #[error("m_index {given} too small for requested band; minimal adequate m_index is {required}")]
    MIndexTooSmall { given: u32, required: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
