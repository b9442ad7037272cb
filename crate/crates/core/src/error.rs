use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("arity mismatch: expected {expected} substitutions, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("unknown variable {0}")]
    UnknownVariable(String),

    #[error("point is not on the space")]
    PointNotOnSpace,

    #[error("derivation is not admissible: {0}")]
    Inadmissible(String),

    #[error("denominator vanishes identically: {0}")]
    DenominatorVanishes(String),

    #[error("form is not basic: {0}")]
    NotBasic(String),

    #[error("space is not invariant under the action: {0}")]
    NotInvariant(String),

    #[error("contraction with the symplectic form is not closed: {0}")]
    NotClosed(String),

    #[error("flow undefined: {0}")]
    FlowUndefined(String),

    #[error("group closure exceeded {0} elements")]
    GroupTooLarge(usize),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
