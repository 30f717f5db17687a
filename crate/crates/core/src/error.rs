use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition of an operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A product, bracket or differential left the retained (truncated) basis.
    #[error("truncation overflow: {0}")]
    Truncation(String),

    /// Malformed algebra or instance description.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// Unknown builtin, bad parameter or similar usage problem.
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn is_truncation(&self) -> bool {
        matches!(self, Error::Truncation(_))
    }
}
