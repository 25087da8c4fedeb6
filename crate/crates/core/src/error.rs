use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("sampling resolution too coarse: spacing {spacing} exceeds δ/4 = {limit}")]
    ResolutionTooCoarse { spacing: f64, limit: f64 },

    #[error("set has unbounded extent without periodic structure; declare a scan range")]
    UnboundedScan,

    #[error("oracle size cap exceeded: {len} points (max {cap})")]
    OracleCap { len: usize, cap: usize },

    #[error("argument {value} lies outside the domain [{lower}, ∞)")]
    Domain { value: f64, lower: f64 },

    #[error("configuration mismatch: {0}")]
    Config(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("empty dilation set sample")]
    EmptySet,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
