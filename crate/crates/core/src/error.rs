use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// An enumeration would exceed the configured cap.
    #[error("budget exceeded: {count} items to enumerate, cap is {cap}")]
    BudgetExceeded { count: String, cap: u64 },

    /// Two independent computations disagreed. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
