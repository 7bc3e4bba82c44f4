use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain (non-positive kernel
    /// argument, non-Hermitian matrix, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A state sits on or beyond the boundary of the positive cone.
    #[error("boundary error: {0}")]
    Boundary(String),

    /// The caller passed inconsistent or out-of-range parameters.
    #[error("usage error: {0}")]
    Usage(String),

    /// A majorisation precondition does not hold.
    #[error("ordering error: {0}")]
    Ordering(String),

    /// A numerical procedure could not produce a trustworthy result.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
