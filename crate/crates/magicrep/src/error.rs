use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group too large (cap {cap})")]
    GroupTooLarge { cap: usize },
    #[error("index {0} out of range")]
    Index(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("prime {p} divides conductor {m}")]
    RamifiedPrime { p: u64, m: u64 },
    #[error("denominator divisible by {0}")]
    NonIntegral(u64),
    #[error("non-unit pivot in local elimination")]
    NonUnitPivot,
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("{0}")]
    Algebra(String),
    #[error("no magic representation found: {0}")]
    NoMagic(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
