use thiserror::Error;

/// Errors shared by every crate in the workspace.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated in {op}: {detail}")]
    Precondition { op: &'static str, detail: String },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("modulus exhausted: {0}")]
    ModulusExhausted(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn pre(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            op,
            detail: detail.into(),
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Precondition { .. } => "precondition",
            Error::Inconclusive(_) => "inconclusive",
            Error::ModulusExhausted(_) => "modulus_exhausted",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
