//! Error types shared across the crate.

use thiserror::Error;

use crate::model::MultiIndex;

/// Errors raised while constructing or parsing tensors and factors.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("row {row} is ragged: expected {expected} cells per slice, found {found}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("observed value at {index} must be nonzero")]
    NonzeroViolation { index: MultiIndex },
    #[error("magnitude at {index} must be positive and finite")]
    NonpositiveMagnitude { index: MultiIndex },
    #[error("observation pattern is empty")]
    EmptyPattern,
    #[error("index {index} out of range for dims {dims:?}")]
    IndexOutOfRange { index: MultiIndex, dims: Vec<usize> },
    #[error("duplicate observation at {index}")]
    DuplicateIndex { index: MultiIndex },
    #[error("cannot parse cell '{cell}' at row {row}, slice {slice}, column {column}")]
    InvalidCell {
        cell: String,
        row: usize,
        slice: usize,
        column: usize,
    },
    #[error("invalid dims: {0}")]
    InvalidDims(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid factors: {0}")]
    InvalidFactors(String),
}

/// Errors raised by the real and complex solvers.
#[derive(Debug, Error)]
pub enum SolveError {
    #[error("observed value at {index} is not real (phase {phase} turns)")]
    NonRealValue { index: MultiIndex, phase: String },
    #[error("brute-force enumeration cap exceeded: m = {m} > cap = {cap}")]
    CapExceeded { m: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Errors raised by the noisy-fit module.
#[derive(Debug, Error)]
pub enum FitError {
    #[error("observed value at {index} is not a strictly positive real")]
    NonPositiveValue { index: MultiIndex },
    #[error("condition (A) fails: {dof} degrees of freedom remain; add observations")]
    ConditionAViolated { dof: usize },
    #[error("noise amplitude {amplitude} too large: minimum true value is {min_value}")]
    AmplitudeTooLarge { amplitude: f64, min_value: f64 },
}
