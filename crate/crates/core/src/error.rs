use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the admissible set.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested discretization would exceed the atom cap.
    #[error("resource error: {0}")]
    Resource(String),

    /// An iterative routine failed to meet its tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// An invariant that should be unreachable was violated.
    #[error("internal error: {0}")]
    Internal(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
