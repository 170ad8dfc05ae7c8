use thiserror::Error;

/// Errors produced by the operators, estimators and solvers in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument is malformed (wrong length, non-monotone ladder, bad size).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The operation is not available for this function variant.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Structural invariants of an input object do not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// The operation requires a different algebra or operator kind.
    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    /// A local estimator did not produce a converged value where one is required.
    #[error("limit not converged: {0}")]
    NotConverged(String),

    /// A textual spec (function, operator, CSV) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
