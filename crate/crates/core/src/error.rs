use thiserror::Error;

/// Errors produced by cube, distribution, regression and learner operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("dimension {dim} outside 1..={max}")]
    BadDim { dim: usize, max: usize },

    #[error("subset size {k} exceeds dimension {d}")]
    SubsetTooLarge { k: usize, d: usize },

    #[error("{what} cap exceeded: {got} > {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("invalid probability table: {0}")]
    BadDistribution(String),

    #[error("noise rate {0} outside [0, 0.5)")]
    BadNoiseRate(f64),

    #[error("delta {0} outside (0, 1)")]
    BadDelta(f64),

    #[error("dataset must contain at least one sample")]
    EmptyDataset,

    #[error("label {0} is not +1 or -1")]
    BadLabel(i32),

    #[error("csv error at line {line}: {msg}")]
    Csv { line: usize, msg: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
