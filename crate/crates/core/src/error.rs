//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse scalar from {0:?}")]
    ScalarParse(String),

    #[error("cannot parse interval set from {0:?}")]
    IntervalParse(String),

    #[error("cannot parse {kind} value from {text:?}")]
    ValueParse { kind: &'static str, text: String },

    #[error("analysis window must be a single interval, got {0}")]
    WindowNotSingleInterval(String),

    #[error("measure is infinite: set contains an unbounded interval")]
    InfiniteMeasure,

    #[error("matrix dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix node labels differ or are out of order")]
    LabelMismatch,

    #[error("walk length {len} exceeds budget {budget}")]
    WalkBudgetExceeded { len: usize, budget: usize },

    #[error("contact map result leaves the piecewise-affine fragment: {0}")]
    ContactFragment(String),

    #[error("value is outside the {0} sub-semi-ring")]
    NotInSubSemiring(&'static str),

    #[error("contact plan line {line}: {msg}")]
    InvalidContact { line: usize, msg: String },

    #[error("contact plan contains no nodes")]
    EmptyContactPlan,

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("unknown semiring tag {0:?}")]
    UnknownSemiring(String),

    #[error("exact permutation search limited to n <= {max}, got n = {n}")]
    ExactSearchTooLarge { n: usize, max: usize },

    #[error("barcode homology degree must be 0 or 1, got {0}")]
    BadDegree(usize),

    #[error("critical values undefined: off-diagonal entry ({i},{j}) is unbounded")]
    UnboundedEntry { i: usize, j: usize },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
