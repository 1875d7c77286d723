use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate pencil: {0}")]
    DegeneratePencil(String),
    #[error("pencil fails the smoothness condition: {0}")]
    NotSmooth(String),
    #[error("evaluation undefined: {0}")]
    Undefined(String),
    #[error("the line through the pair lies on X; no base point")]
    LineInX,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
