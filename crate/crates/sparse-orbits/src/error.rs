//! Crate-wide error type. Preconditions fail loudly with enough context to
//! name the offending input.

use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input must be positive, got {0}")]
    NotPositive(u64),

    #[error("{0} exceeds the supported range (must fit in 63 bits)")]
    OutOfRange(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("moduli {0} and {1} are not coprime (gcd = {2})")]
    NonCoprimeModuli(u128, u128, u128),

    #[error("modulus product overflows 128-bit intermediates")]
    ModulusOverflow,

    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { divisor: u64, dividend: u64 },

    #[error("principal character rejected for {0}")]
    PrincipalCharacter(&'static str),

    #[error("{0} must be a root of unity of order dividing {1}")]
    BadRootOfUnity(String, u64),

    #[error("shift i = 0 is rejected")]
    ZeroShift,

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("prime factor {p} of {n} is not congruent to 1 mod {c}")]
    BadPrimeFactor { p: u64, n: u64, c: u64 },

    #[error("scaled characters {0} and {1} share a prime (moduli-times-scales must be pairwise coprime)")]
    SharedPrime(u64, u64),

    #[error("sequence magnitude {0} exceeds 1 at index {1}")]
    MagnitudeExceedsOne(f64, usize),

    #[error("budget exceeded in {what}: needs {needed}, cap {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("search for denominator index {index} exhausted after {budget} steps")]
    SearchExhausted { index: usize, budget: u64 },

    #[error("need convergent index {required} but only {available} are available")]
    InsufficientConvergents { required: usize, available: usize },

    #[error("amplitude schedule incompatible at index {index}: (q_n/q_n+1)^(1/5) = {ratio} exceeds {cap} (denominator ratios too large)")]
    ScheduleIncompatible { index: usize, ratio: f64, cap: f64 },

    #[error("precision insufficient: {0}")]
    PrecisionLoss(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
