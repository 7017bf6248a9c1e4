use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("division by an interval containing zero")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(&'static str),

    /// Some pairwise distance enclosure reaches zero (indices are body labels).
    #[error("possible collision between bodies {i} and {j}")]
    PossibleCollision { i: usize, j: usize },

    #[error("singular matrix")]
    Singular,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid hex float {0:?}")]
    HexFloat(String),

    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
