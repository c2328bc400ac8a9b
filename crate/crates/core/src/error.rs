use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("value is not integral: {0}")]
    NotIntegral(String),
    #[error("no solution: {0}")]
    Inconsistent(String),
    #[error("precision instability: {0}")]
    Precision(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
