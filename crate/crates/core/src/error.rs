use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input for `{param}`: {msg}")]
    InvalidInput { param: String, msg: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("truncation insufficient: {0}")]
    Truncation(String),
    #[error("polynomial certification failed: {0}")]
    Certification(String),
    #[error("unsupported decoration: {0}")]
    UnsupportedDecoration(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn invalid(param: &str, msg: impl Into<String>) -> Self {
        Error::InvalidInput { param: param.to_string(), msg: msg.into() }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput { .. } => "invalid-input",
            Error::InvalidGraph(_) => "invalid-graph",
            Error::SpaceMismatch(_) => "space-mismatch",
            Error::Truncation(_) => "truncation-insufficient",
            Error::Certification(_) => "certification-failure",
            Error::UnsupportedDecoration(_) => "unsupported-decoration",
            Error::Parse(_) => "parse-error",
        }
    }

    pub fn parameter(&self) -> Option<&str> {
        match self {
            Error::InvalidInput { param, .. } => Some(param),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
