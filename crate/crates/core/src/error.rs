//! Error type shared by the library and the command-line front end.

use thiserror::Error;

/// Failure modes surfaced by library operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Input rejected before any computation (bad shape, out-of-range parameter, malformed config).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A numerical guard tripped (non-PSD covariance, residue above tolerance, degenerate field).
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code associated with this error: 1 for validation, 2 for numerical checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
