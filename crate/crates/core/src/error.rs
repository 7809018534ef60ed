use thiserror::Error;

/// Errors raised by state construction, enumeration and optimization.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range (must be < {bound})")]
    Index { index: usize, bound: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A request that would exceed a configured search or size limit.
    #[error("resource cap exceeded: {0}")]
    Cap(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
