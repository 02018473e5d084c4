use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Text input (curve, bundle, point, rational) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A bounded search would exceed its configured ceiling.
    #[error("search bound exceeded: {needed} > {ceiling}")]
    BoundExceeded { needed: u128, ceiling: u128 },

    /// An input vector violates the stated precondition of a check.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Intermediate value does not fit the machine integer used by the kernel.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Writing a report failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
