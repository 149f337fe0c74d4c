use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input data.
    #[error("input error: {0}")]
    Input(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A bounded procedure ran out of its step budget.
    #[error("budget exhausted: {0}")]
    Budget(String),
    /// A violated internal invariant; always a bug.
    #[error("internal error: {0}")]
    Internal(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
