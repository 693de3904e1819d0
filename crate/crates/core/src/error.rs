use crate::instance::MeterError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    /// A precondition of the requested routine does not hold for the input.
    #[error("{0}")]
    Domain(String),
    #[error("instance has {size} items, exhaustive search is capped at {cap}")]
    Refused { size: usize, cap: usize },
    #[error(transparent)]
    Meter(#[from] MeterError),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
