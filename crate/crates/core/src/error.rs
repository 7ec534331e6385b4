use thiserror::Error;

/// Errors raised by the analytics, channel and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration is internally inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An index (scatterer, path, symbol) is out of range.
    #[error("index {index} out of range 1..={len}")]
    Index { index: usize, len: usize },

    /// Matrix or vector dimensions do not agree.
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
