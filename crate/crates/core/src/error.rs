use thiserror::Error;

use crate::superpoly::SuperSignature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch {
        left: SuperSignature,
        right: SuperSignature,
    },
    #[error("{kind} variable index {index} out of range 1..={max}")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        max: usize,
    },
    #[error("operation needs at least one commuting variable (m >= 1)")]
    NoBosonicVariable,
    #[error("at most 64 anticommuting variables are supported, got 2n = {0}")]
    TooManyOddVariables(usize),
    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("vector has length {got}, ambient dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
