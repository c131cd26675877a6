use thiserror::Error;

/// Failure modes shared by every stage of the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A negative power was requested for a gate that has neither an inverse nor a period.
    #[error("gate {gate_id} ({name}) cannot realize a negative power: no inverse and no period")]
    Capability { gate_id: usize, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
