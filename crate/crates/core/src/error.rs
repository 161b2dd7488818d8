use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("phase-space dimension must be odd and >= 3, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("analyzing vector must be nonzero")]
    ZeroAnalyzingVector,

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("not a probability measure: {0}")]
    NotProbability(String),

    #[error("time parameter must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("not a candidate positive-type function: Gram matrix asymmetry {asymmetry:e} exceeds {limit:e}")]
    NotPositiveTypeCandidate { asymmetry: f64, limit: f64 },

    #[error("inadmissible wavelet: {0}")]
    Inadmissible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown star-product mode `{0}`")]
    UnknownMode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
