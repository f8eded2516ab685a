use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sieve limit {limit} is below the minimum of 2")]
    LimitTooSmall { limit: u64 },

    #[error(
        "sieve limit {limit} needs {bytes} bytes of table, over the {budget}-byte memory budget; \
         lower the limit or raise the budget"
    )]
    OverMemoryBudget { limit: u64, bytes: u64, budget: u64 },

    #[error("{n} is outside the factorization range 1..={limit}")]
    OutOfRange { n: u64, limit: u64 },

    #[error("d(n^2) = {count} for n = {n} exceeds the divisor enumeration cap of {cap}")]
    DivisorCap { n: u64, count: u64, cap: u64 },

    #[error("brute-force enumeration budget exceeded: n = {n} > {budget}")]
    BruteForceBudget { n: u64, budget: u64 },

    #[error("gcd({n}, {a}) = {gcd} > 1; this method needs coprime inputs, use r_general")]
    NotCoprime { n: u64, a: u64, gcd: u64 },

    #[error("character moduli differ: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("character mod {modulus} has order {order}; only principal or quadratic characters are accepted")]
    NotQuadratic { modulus: u64, order: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// Consistency failures are correctness alarms (CLI exit code 2).
    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}
