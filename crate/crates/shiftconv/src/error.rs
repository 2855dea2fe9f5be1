//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{a} is not invertible mod {modulus} (gcd = {gcd})")]
    NotCoprime { a: i64, modulus: u64, gcd: u64 },

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("{d} does not divide {c}")]
    NotDivisor { d: u64, c: u64 },

    #[error("moduli set is empty")]
    EmptyModuliSet,

    #[error("coefficient stream too short: need {needed}, have {len}")]
    StreamTooShort { needed: usize, len: usize },

    #[error("out of range: {0}")]
    Range(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("objective is unbounded: {0}")]
    Unbounded(String),

    #[error("cache file rejected: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
