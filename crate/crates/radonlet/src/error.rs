use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("degree {degree} too high for level {level} (requires degree < 2^level)")]
    DegreeTooHigh { degree: u32, level: u32 },

    #[error("cubature rule exact to degree {got} is insufficient, need at least {need}: {context}")]
    InsufficientExactness { need: u32, got: u32, context: String },

    #[error("numerical validation failed: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
