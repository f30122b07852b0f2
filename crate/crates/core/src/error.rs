use thiserror::Error;

/// Errors raised by the library. Validation findings that are not fatal are
/// returned as a [`ValidationReport`](crate::ValidationReport) instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("matrix has no rows")]
    EmptyMatrix,
    #[error("entry ({i}, {j}) is {value}; distances must be finite and nonnegative")]
    BadEntry { i: usize, j: usize, value: f64 },
    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch { what: &'static str, got: usize, expected: usize },
    #[error("index {index} out of range for a space with {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index set must be non-empty")]
    EmptySet,
    #[error("list of functions must be non-empty")]
    EmptyList,
    #[error("target point {0} is not well formed for the target space")]
    BadTargetPoint(String),
    #[error("fields live over different target spaces")]
    TargetMismatch,
    #[error("function is not 1-Lipschitz on the given set: |f({i}) - f({j})| exceeds d by {excess}")]
    NotLipschitz { i: usize, j: usize, excess: f64 },
    #[error("one-point candidate is infeasible: {0}")]
    Infeasible(String),
    #[error("marginals are infeasible: {0}")]
    InfeasibleMarginals(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("problem of size {size} exceeds the exact-solver limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("field has zero total measure")]
    ZeroMeasure,
    #[error("coupling has empty support")]
    EmptySupport,
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
