use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    Field(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("line {line}: {msg}")]
    ParseLine { line: usize, msg: String },
    #[error("invalid arrangement: {0}")]
    Arrangement(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A cross-check between two independent computations disagreed. This
    /// signals a bug, never a mathematical outcome.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}
