use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} outside the domain (minimum {min})")]
    IndexOutOfDomain { index: i64, min: i64 },
    #[error("order k = {k} not supported here (need k >= {min})")]
    UnsupportedOrder { k: usize, min: usize },
    #[error("vector has dimension {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("operation undefined for the zero vector")]
    ZeroVector,
    #[error("index set {0:?} is not a satisfying representation")]
    NotSatisfying(Vec<usize>),
    #[error("invalid index set {0:?}: indices must be distinct and >= 1")]
    InvalidIndexSet(Vec<usize>),
    #[error("j = {j} is too small for this vector")]
    JBoundTooSmall { j: usize },
    #[error("normalization did not finish within {budget} rewrites")]
    NormalizationDiverged { budget: usize },
    #[error("vector entries too large for this operation")]
    VectorTooLarge,
    #[error("no representation found within max index {max_index}")]
    NotFound { max_index: usize },
    #[error("{count} representations found within max index {max_index}")]
    MultipleFound { max_index: usize, count: usize },
    #[error("search budget of {budget} summands exhausted")]
    BudgetExhausted { budget: usize },
    #[error("power series division by a series with zero constant term")]
    DivisionByNonUnit,
    #[error("numerical procedure failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("closed-form reconstruction disagrees with the recurrence at n = {n}")]
    ReconstructionMismatch { n: usize },
    #[error("strategies disagree on {v}: {detail}")]
    StrategyMismatch { v: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
