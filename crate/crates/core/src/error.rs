use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The variants map one-to-one onto the exit-code classes of the CLI.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The caller violated a precondition (dead vertex, bad parameter, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// A mutation would break a structural invariant of the data model.
    #[error("invariant violation: {0}")]
    Invariant(String),
    /// The request exceeds a configured enumeration or size limit.
    #[error("capability limit exceeded: {0}")]
    Capability(String),
    /// Malformed input text.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A condition that the algorithms guarantee was found violated.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
