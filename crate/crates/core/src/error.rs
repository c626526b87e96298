use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot factor the zero polynomial")]
    ZeroInput,
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(String, String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} out of range (N = {n})")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("point has a zero coordinate at index {0}")]
    ZeroCoordinate(usize),
    #[error("degree {degree} exceeds the exact-arithmetic cap {cap}")]
    DegreeCap { degree: u128, cap: u64 },
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("no usable modulus found after {0} attempts")]
    NoModulus(usize),
    #[error("sequence is not integer-valued")]
    NonInteger,
    #[error("group-sequence reconstruction failed at n = {0}")]
    ClaimVerification(u64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
