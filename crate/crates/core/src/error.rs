use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Stage and parameter indices in errors are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty spec")]
    EmptySpec,
    #[error("parameter {index} is {value}, expected a finite probability in [0, 1]")]
    InvalidProbability { index: usize, value: f64 },
    #[error("{what} is {value}, expected a finite probability in [0, 1]")]
    InvalidParameter { what: &'static str, value: f64 },
    #[error("stage {stage} outside 1..={n}")]
    StageOutOfRange { stage: usize, n: usize },
    #[error("stages must satisfy 1 <= k < i <= {n}, got k = {k}, i = {i}")]
    StageOrder { k: usize, i: usize, n: usize },
    #[error("degenerate odds: p_{index} = 1, use the threshold-search fallback")]
    DegenerateOdds { index: usize },
    #[error("n = {n} exceeds the enumeration limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("{what} must be at least {min}, got {value}")]
    BelowMinimum {
        what: &'static str,
        min: usize,
        value: usize,
    },
    #[error("parameter {index} is {value}; this variant requires every p_i < 1/2")]
    NotSubHalf { index: usize, value: f64 },
    #[error("every parameter is zero")]
    AllZero,
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("stage {stage} is not a decision stage for n = {n}")]
    NotDecisionStage { stage: usize, n: usize },
    #[error("grid step {0} must lie in (0, 1)")]
    GridStep(f64),
}
