use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("operator word rejected at letter {position}: {reason}")]
    Word { position: usize, reason: String },

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("seed rejected: {0}")]
    SeedRejected(String),

    /// A random draw projected to the zero field; retry with another seed.
    #[error("degenerate random draw (projection produced the zero field)")]
    DegenerateDraw,

    #[error("instance rejected: {0}")]
    Hypothesis(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
