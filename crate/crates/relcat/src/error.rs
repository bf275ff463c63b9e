use thiserror::Error;

/// Errors shared across the crate.
///
/// Validation problems of the report-producing checkers are *not* errors:
/// those come back inside the report. `Error` is reserved for inputs that
/// cannot be processed at all (malformed data, blown quotas, overflow).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A construction would exceed the configured size caps.
    #[error("quota exceeded while building {what}: {attempted} > cap {cap}")]
    Quota {
        what: &'static str,
        attempted: usize,
        cap: usize,
    },

    /// Structurally invalid input (dangling ids, non-functorial maps, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// An operation that requires a groupoid was fed something else.
    #[error("not a groupoid: {0}")]
    NotGroupoid(String),

    /// Integer overflow in exact arithmetic.
    #[error("integer overflow during {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
