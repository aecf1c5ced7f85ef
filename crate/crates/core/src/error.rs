use thiserror::Error;

/// Errors raised by the numerical and physical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("non-finite value encountered at x = {x}")]
    NonFinite { x: f64 },

    #[error("invalid bracket [{lo}, {hi}]: {reason}")]
    InvalidBracket { lo: f64, hi: f64, reason: String },

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal consistency violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
