use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid Jordan normal form: {0}")]
    InvalidJnf(String),
    #[error("scalars of different modes cannot be combined")]
    MixedModes,
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("the product of all eigenvalues is not 1 (resp. their sum is not 0)")]
    GlobalConditionViolated,
    #[error("reduction step precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid eigenvalue choice: {0}")]
    InvalidChoice(String),
    #[error("claimed eigenvalues do not match the matrix: {0}")]
    WrongSpectrum(String),
    #[error("invalid matrix tuple: {0}")]
    InvalidTuple(String),
    #[error("tuple does not close up (product is not I, resp. sum is not 0)")]
    ClosureViolated,
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
