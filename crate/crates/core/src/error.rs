use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Caller broke an interface contract (mismatched grids, invalid spec, ...).
    #[error("contract violation: {0}")]
    Contract(String),
    /// A sampling grid does not meet the requirements of a fit.
    #[error("grid design error: {0}")]
    GridDesign(String),
    /// Evaluation requested exactly at an excluded singular point.
    #[error("singular point: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
