use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid CSR structure: {0}")]
    InvalidStructure(String),

    #[error("matrix market parse error at line {line}: {msg}")]
    MatrixMarket { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("entry ({row}, {col}) lies outside bandwidth {bandwidth}")]
    NotBanded { row: usize, col: usize, bandwidth: usize },

    #[error("dense oracle capped at n = {cap}, matrix has n = {n}")]
    TooLarge { n: usize, cap: usize },

    #[error("interpolation nodes {0} and {1} coincide")]
    CoincidentNodes(usize, usize),

    #[error("spectral interval has zero width; use the degenerate log path")]
    DegenerateMap,

    #[error("conjugate gradient stalled after {iterations} iterations at relative residual {residual:e}")]
    CgNotConverged { iterations: usize, residual: f64 },

    #[error("non-finite value at interpolation step {step}")]
    NonFinite { step: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
