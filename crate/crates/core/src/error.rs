use thiserror::Error;

/// Errors raised by the algebra and summation layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomial must be nonconstant")]
    ConstantPolynomial,

    #[error("exponent k = {k} is not divisible by q - 1 = {qm1}")]
    UnsupportedExponent { k: u64, qm1: u64 },

    #[error("size bound exceeded: {0}")]
    SizeBound(String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("rational reconstruction failed: {0}")]
    ReconstructionFailed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
