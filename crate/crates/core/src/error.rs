use thiserror::Error;

/// Errors raised by library operations.
///
/// The variants split into two families: problems with the caller's data
/// (`Invalid`, `UnknownOrbit`, `Parse`) and well-formed requests the library
/// declines to answer (`NoLevelFunction`, `Refused`, `Ambiguous`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown orbit `{0}`")]
    UnknownOrbit(String),
    #[error("could not parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("no valid level function: {0}")]
    NoLevelFunction(String),
    #[error("ambiguous star label at vertex `{0}`: both primes divide")]
    Ambiguous(String),
    #[error("computation refused: {0}")]
    Refused(String),
}

impl Error {
    /// True for errors caused by malformed or inconsistent input data.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Invalid(_) | Error::UnknownOrbit(_) | Error::Parse { .. })
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
