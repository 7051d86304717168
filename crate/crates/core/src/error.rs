use thiserror::Error;

/// Failures that are not law violations.
///
/// A law that fails on a well-formed input is reported through
/// [`crate::Verdict`], never through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedInput(msg.into())
}

pub(crate) fn mismatch(msg: impl Into<String>) -> Error {
    Error::TypeMismatch(msg.into())
}
