use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision {0} outside 8..=53 bits")]
    InvalidPrecision(u32),
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),
    #[error("unknown region {0:?}")]
    UnknownRegion(String),
    #[error("Newton iteration did not converge")]
    NoConvergence,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
