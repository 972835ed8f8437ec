use thiserror::Error;

/// Errors produced by the operator, inverse and probe routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice mismatch: expected {expected}, found {found}")]
    LatticeMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("index {0} is not on the half-line")]
    NegativeIndex(i64),
    #[error("probability {0} is outside the open interval (0, 1)")]
    InvalidProbability(f64),
    #[error("invalid sequence space: {0}")]
    InvalidSpace(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
