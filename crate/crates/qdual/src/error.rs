use thiserror::Error;

pub type Result<T> = std::result::Result<T, QError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series diverges (terms not decreasing after {terms} terms)")]
    DivergentSeries { terms: usize },

    #[error("denominator parameter vanishes at summation index {index}")]
    PoleInDenominator { index: usize },

    #[error("term cap of {cap} exceeded before the tail bound was met")]
    TermCapExceeded { cap: usize },

    #[error("eigenvalue iteration did not converge for index {index}")]
    NoConvergence { index: usize },

    #[error("operation not supported for family {0}")]
    UnsupportedFamily(String),

    #[error("unknown special point {0}")]
    UnknownPoint(String),

    #[error("invalid branch {0}")]
    InvalidBranch(String),

    #[error("negative radicand {value:e} in coefficient {index}")]
    NegativeRadicand { index: usize, value: f64 },

    #[error("truncated sum could not certify its tail: bound {bound:e} after {terms} terms")]
    TailNotBounded { bound: f64, terms: usize },

    #[error("input system is not orthogonal (residual {residual:e})")]
    InputNotOrthogonal { residual: f64 },
}
