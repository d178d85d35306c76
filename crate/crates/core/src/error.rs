use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why the bounded-distance decoder refused to return a codeword.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum FailureReason {
    /// Two candidate symbols shared the minimal score at some point.
    Tie,
    /// The reconstructed word failed the membership check.
    NotInCode,
    /// The reconstructed codeword is farther than `e_low` from the input.
    RadiusExceeded,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::Tie => "tie",
            FailureReason::NotInCode => "not in code",
            FailureReason::RadiusExceeded => "radius exceeded",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field {p}^{l} exceeds 2^16 elements")]
    TooLarge { p: u32, l: u32 },
    #[error("modulus {0:?} is reducible")]
    Reducible(Vec<u32>),
    #[error("modulus {0:?} is not a monic digit vector of the right degree")]
    BadModulus(Vec<u32>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value} out of range (must be < {bound})")]
    OutOfRange { value: u64, bound: u64 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace basis is not of full rank")]
    RankDeficient,
    #[error("{found} erasures, at most {allowed} allowed")]
    TooManyErasures { found: usize, allowed: usize },
    #[error("bad word length: expected {expected}, found {found}")]
    BadLength { expected: usize, found: usize },
    #[error("message length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("brute-force search size {size} exceeds limit {limit}")]
    SearchTooLarge { size: u64, limit: u64 },
    #[error("exhaustive membership check of size {size} exceeds limit {limit}")]
    TooLargeForExhaustive { size: u64, limit: u64 },
    #[error("degree tuple {0:?} is not in the degree set of the code")]
    BadSupport(Vec<u32>),
    #[error("word contains erasures where none are allowed")]
    UnexpectedErasure,
    #[error("epsilon {0} outside (0, (q-1)/q]")]
    BadEpsilon(f64),
    #[error("symbol error probability {0} outside [0, (q-1)/q]")]
    BadProbability(f64),
    #[error("high-error decoding requires a single-parity-check base code")]
    NotSpc,
    #[error("{requested} lines requested but only {available} directions exist")]
    TooManyLines { requested: u64, available: u64 },
    #[error("error weight {w} exceeds length {n}")]
    BadWeight { w: usize, n: usize },
    #[error("decoding failed: {0}")]
    DecodeFailure(FailureReason),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
