use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid partition: {0}")]
    PartitionInvalid(String),

    #[error("empty game: a game needs at least one row and one column")]
    EmptyGame,

    #[error("partitions are over different row sets ({0} vs {1} rows)")]
    UniverseMismatch(usize, usize),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("scale guard exceeded: {rows}x{cols} game is over the m+n <= {limit} limit (override to run anyway)")]
    ScaleGuardExceeded { rows: usize, cols: usize, limit: usize },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("invalid X3C instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("polytope is unbounded")]
    UnboundedPolytope,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid deviation plan: {0}")]
    InvalidPlan(String),

    #[error("internal error: {0}")]
    Internal(String),
}
