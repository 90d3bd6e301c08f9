use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scenario: {0}")]
    Scenario(String),

    #[error("polynomial parse error at column {col}: {msg}")]
    PolyParse { col: usize, msg: String },

    #[error("invalid field: {0}")]
    Field(String),

    #[error("degree bookkeeping violated: {0}")]
    Degree(String),

    #[error("presentation invalid: {0}")]
    Presentation(String),

    #[error("basis for tridegree ({h},{w},{d}) exceeds cap {cap}")]
    Resource { h: i32, w: i32, d: i32, cap: usize },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
