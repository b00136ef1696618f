use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at {location}")]
    Pole { location: f64 },

    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("division by (near) zero: {0}")]
    ZeroDivisor(String),

    #[error("wrong case: {0}")]
    WrongCase(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
