use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or out-of-range input supplied by the caller.
    #[error("input error: {0}")]
    Input(String),

    /// A sign constraint that no row satisfies.
    #[error("unsatisfiable constraint")]
    Unsatisfiable,

    /// A randomized or budgeted search gave up. Says nothing about existence.
    #[error("not found within budget {budget}")]
    NotFound { budget: usize },

    /// An exhaustive oracle refused an instance above its cutoff.
    #[error("instance too large for exhaustive search: {0}")]
    Refused(String),

    /// An approximate game solution could not be certified to the requested gap.
    #[error("game solution not certified: {0}")]
    NotCertified(String),

    /// A postcondition failed. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
