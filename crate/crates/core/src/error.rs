use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters alpha={alpha}, beta={beta}: need 0 <= beta < alpha")]
    InvalidParams { alpha: BigInt, beta: BigInt },
    #[error("input must be nonnegative, got {0}")]
    NegativeInput(BigInt),
    #[error("{0} lies outside the real domain of the transit time")]
    OutOfDomain(BigInt),
    #[error("residue r={r} out of range 0..{d}")]
    ResidueOutOfRange { r: BigInt, d: BigInt },
    #[error("invalid rotation number {m}/{n}: need 0 < m < n and gcd(m, n) = 1")]
    InvalidRotationNumber { m: BigInt, n: BigInt },
    #[error("operation undefined for trivial parameters (beta = 0 or alpha = 2 beta)")]
    TrivialParams,
    #[error("operation requires canonical parameters (gcd(alpha, beta) = 1 and alpha > 2 beta)")]
    NonCanonical,
    #[error("operation requires alpha/gcd(alpha, 2 beta) to be even")]
    AlphaBarOdd,
    #[error("{0} is not in the image of the transit map")]
    NotInImage(BigInt),
    #[error("step budget of {0} exhausted")]
    BudgetExhausted(u64),
    #[error("{0} is not a regular point")]
    Irregular(BigInt),
    #[error("code length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} exceeds the supported machine range")]
    TooLarge(&'static str),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
