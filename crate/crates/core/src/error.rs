use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The data cannot come from any graph: an integrality or consistency
    /// check along a reconstruction pipeline failed.
    #[error("inconsistent deck: {0}")]
    Inconsistent(String),

    #[error("vertex count {0} out of supported range")]
    OutOfRange(usize),

    #[error("not enough coefficients: need {needed}, have {available}")]
    Truncated { needed: usize, available: usize },

    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("leading coefficient {0} is not invertible")]
    NotInvertible(String),

    #[error("series is not a square: {0}")]
    NotSquare(String),

    #[error("singular Hankel block of size {size}")]
    Singular { size: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn inconsistent(msg: impl Into<String>) -> Error {
    Error::Inconsistent(msg.into())
}

pub(crate) fn truncated(needed: usize, available: usize) -> Error {
    Error::Truncated { needed, available }
}
