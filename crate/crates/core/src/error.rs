use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rank/level: {0}")]
    InvalidLevelRank(String),
    #[error("weight not in the alcove: {0}")]
    OutsideAlcove(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("non-integral value where an integer was required: {0}")]
    NonIntegral(String),
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
