use thiserror::Error;

/// Errors raised by the algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Text input could not be parsed.
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// Two operands carry windows that cannot be compared.
    #[error("window mismatch: {0}")]
    Window(String),
    /// A series expected to be nilpotent did not terminate.
    #[error("series did not terminate within {0} steps")]
    NonTerminating(usize),
    /// A change of basis left a nonzero residual.
    #[error("nonzero residual in Schur expansion: {0}")]
    Residual(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
