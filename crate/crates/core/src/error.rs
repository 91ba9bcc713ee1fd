use thiserror::Error;

/// Errors produced by code construction, parsing and decoding.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("data length {k} out of range for code length {n}")]
    DataLengthOutOfRange { k: usize, n: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("rate profile has {found} information bits, expected {expected}")]
    ProfileWeight { expected: usize, found: usize },
    #[error("invalid connection polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("parameter {name} out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("store capacity must be at least one")]
    ZeroCapacity,
}

pub type Result<T> = std::result::Result<T, Error>;
