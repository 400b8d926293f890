use thiserror::Error;

/// Errors raised by the model and its configuration layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration value violates an invariant. `path` is the dotted
    /// config path of the offending field, e.g. `thresholds.fa_p`.
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },

    /// A model function was called outside its mathematical domain.
    #[error("{op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// The configuration document could not be parsed.
    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    /// Config path of the offending field, if this is a validation error.
    pub fn path(&self) -> Option<&str> {
        match self {
            Error::Invalid { path, .. } => Some(path),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
