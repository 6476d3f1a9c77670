use thiserror::Error;

/// Errors raised by the library. Divergent integrals are not errors; they are
/// reported as `f64::INFINITY`.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the admissible domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Structurally invalid value (overlapping intervals, non-monotone profile, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A checker precondition does not hold for the given input.
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
