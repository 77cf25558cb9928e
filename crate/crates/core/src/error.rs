use thiserror::Error;

/// Errors raised by the arithmetic, the solvers and the reductions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed text or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// An operation was called outside its domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An exhaustive search would exceed its configured budget.
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    /// A structural invariant of a reduction failed at runtime.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A replayed oracle trace did not match the calls being made.
    #[error("replay mismatch: {0}")]
    Replay(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn invariant(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invariant(msg()))
    }
}
