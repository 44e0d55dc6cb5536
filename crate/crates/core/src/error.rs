use alloc::string::String;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("tile lengths must satisfy 0 < b < a (got a = {a}, b = {b})")]
    InvalidTiles { a: String, b: String },

    #[error("{a} and {b} are not coprime")]
    NotCoprime { a: u64, b: u64 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("modulus must be an odd integer >= 3, got {0}")]
    InvalidModulus(u64),

    #[error("residue {i} is out of range for modulus {p}")]
    ResidueOutOfRange { p: u64, i: u64 },

    #[error("{0} is not congruent to 1 mod 4")]
    NotOneModFour(u64),

    #[error("class number estimate {raw} for p = {p} is not within {tol:e} of an integer")]
    NonIntegralClassNumber { p: u64, raw: f64, tol: f64 },

    #[error("Hua's bound L(1, chi) < log(p)/2 + 1 fails for p = {p} (L = {l_value})")]
    HuaBound { p: u64, l_value: f64 },

    #[error("no closed-form exponent for prime {0}: it lies outside the classes P1, P21, P23")]
    UnsupportedClass(u64),

    #[error("transfer recursion S(2^s n) = M S(n) fails for p = {p} at n = {n}")]
    TransferMismatch { p: u64, n: u64 },

    #[error("dominant eigenvalues for p = {0} have no rational phase of order <= 8")]
    AperiodicPhase(u64),

    #[error("at least {needed} sizes are required, got {got}")]
    TooFewSizes { needed: usize, got: usize },

    #[error("approximant sum vanishes at size {0}")]
    Extinct(u64),

    #[error("exponent {0} lies outside the open interval (-1, 1)")]
    ExponentOutOfRange(f64),

    #[error("wave vector is a Bragg point; the operation needs a singular one")]
    BraggInput,

    #[error("eps term {eps} at n = {n} is not in {{0, 1, -1}}")]
    CoquetRemainder { n: u64, eps: i64 },

    #[error("horizon 2^{0} exceeds the supported budget")]
    Budget(u32),

    #[error("value does not fit in machine integers: {0}")]
    Overflow(&'static str),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
