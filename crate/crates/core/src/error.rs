use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} of zero undefined")]
    ZeroPolynomial(&'static str),

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(BigInt),

    #[error("closed form requires n >= 0, got {0}")]
    NegativeIndex(i64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is neither 0 nor prime")]
    NotZeroOrPrime(u64),

    #[error("field size {p}^{e} exceeds bound {bound}")]
    FieldTooLarge { p: u64, e: u32, bound: u64 },

    #[error("field context mismatch")]
    ContextMismatch,

    #[error("inverse of zero")]
    DivisionByZero,

    #[error("wrong case: expected {expected}, field is {found}")]
    WrongCase {
        expected: &'static str,
        found: &'static str,
    },

    #[error("non-integral Dickson term at n={n}, k={k}, i={i}")]
    NonIntegralTerm { n: u64, k: u64, i: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
