use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit class.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or out-of-range input; the message names the offending field.
    #[error("invalid input `{field}`: {reason}")]
    InvalidInput { field: String, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An operation's precondition does not hold for otherwise valid input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Enumeration would exceed the configured word budget.
    #[error("word budget exceeded: {needed} words requested, budget is {budget}")]
    Budget { needed: u128, budget: u64 },

    /// The quantity is undefined or numerically degenerate (zero singular value, zero spectral form).
    #[error("numerically degenerate: {0}")]
    Degenerate(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn input(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
