use alloc::string::String;

/// Errors raised by the algebraic and graph constructions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field exponent must be at least 1")]
    ZeroExponent,
    #[error("order {order} exceeds the configured bound {bound}")]
    TooLarge { order: u64, bound: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cubing is not a bijection on F_{q} (q = 1 mod 3)")]
    CubingNotBijective { q: u64 },
    #[error("operation requires {expected} q, got q = {q}")]
    WrongParity { q: u64, expected: &'static str },
    #[error("operation not available in characteristic {p}: {reason}")]
    UnsupportedCharacteristic { p: u64, reason: &'static str },
    #[error("operation requires a prime field, got q = {q}")]
    NotPrimeField { q: u64 },
    #[error("unsupported cyclotomic conductor {0}; only primes and 9 are supported")]
    UnsupportedConductor(u64),
    #[error("cyclotomic conductors differ: {0} vs {1}")]
    MismatchedConductors(u64, u64),
    #[error("the Weil bound needs weighted degree d >= 2, got {0}")]
    WeilDegree(u32),
    #[error("parameter must be nonzero: {0}")]
    ZeroParameter(&'static str),
    #[error("negative radicand {0} while lifting a spectrum to D(4,q)")]
    NegativeRadicand(String),
    #[error("closed-form check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
