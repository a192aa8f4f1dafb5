use num_bigint::{BigInt, BigUint};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational `{0}`")]
    InvalidNumber(String),

    #[error("invalid irrational: {0}")]
    InvalidIrrational(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid prescription: {0}")]
    InvalidPrescription(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("leftover index of integer {value} exceeds scan limit {limit}")]
    ScanLimitExceeded { value: BigInt, limit: BigUint },

    #[error("construction check failed: {0}")]
    Construction(String),

    #[error("corrupt cache: {0}")]
    CorruptCache(String),

    #[error("cache fingerprint {found} does not match prescription fingerprint {expected}")]
    FingerprintMismatch { expected: String, found: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
