use thiserror::Error;

/// Errors raised by the library. Every variant corresponds to a violated
/// precondition or a failed numerical self-check; none are recoverable by
/// retrying with the same input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus must be positive, got {0}")]
    ZeroModulus(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("({p}, {q}) is not obtuse for n = {n}: need p + q < n/2")]
    NotObtuse { p: u64, q: u64, n: u64 },

    #[error("({p}, {q}) has gcd(p, q, n) > 1 for n = {n}")]
    NotLowestTerms { p: u64, q: u64, n: u64 },

    #[error("interval length {m} outside [1, {}] for n = {n}", n.saturating_sub(1))]
    IntervalOutOfRange { n: u64, m: u64 },

    #[error("{d} does not divide {n}")]
    NotDivisor { d: u64, n: u64 },

    #[error("q = {q} is divisible by the largest prime factor {prime} of n")]
    SharesLargestPrime { q: u64, prime: u64 },

    #[error("eta = {num}/{den} must satisfy 0 <= eta < 1/6")]
    EtaOutOfRange { num: u64, den: u64 },

    #[error("R = {0} must be at least 2")]
    ThresholdTooSmall(f64),

    #[error("n = {0} is below the domain of the log log n formulas (n >= 16)")]
    BelowAsymptoticDomain(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
