use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("identical sections")]
    IdenticalSections,
    #[error("inconsistent ramification data: {0}")]
    InconsistentRamification(String),
    #[error("orbifold is not of general type")]
    NotGeneralType,
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("truncation exhausted: {0}")]
    TruncationExhausted(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("no admissible parameters found: {0}")]
    NoAdmissibleParameters(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
