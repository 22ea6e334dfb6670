use thiserror::Error;

/// Errors raised by the series engine and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Truncation parameters are incompatible or out of range.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exponential would not terminate at fixed truncation.
    #[error("divergence error: {0}")]
    Divergence(String),
    /// Extracted data violates an identity it must satisfy.
    #[error("consistency error: {message}")]
    Consistency {
        message: String,
        offending: Vec<String>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
