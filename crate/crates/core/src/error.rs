use thiserror::Error;

/// Errors reported by constructors and operation preconditions.
///
/// Every precondition failure names the clause that failed; computations
/// themselves are total once their inputs are validated.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse `{0}` as a rational (expected `p/q` or `p`)")]
    ParseRational(String),

    #[error("rational denominator is zero")]
    ZeroDenominator,

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0}")]
    InvalidInput(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
