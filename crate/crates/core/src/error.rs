use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance has no generators")]
    EmptyInstance,
    #[error("generator {0} is the zero vector")]
    ZeroGenerator(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix columns are linearly dependent")]
    RankDeficient,
    #[error("negative entry outside the non-negative solver domain: {0}")]
    NegativeEntry(String),
    #[error("not a positive knapsack instance: {0}")]
    NotKnapsack(String),
    #[error("right-hand side is not in the semigroup")]
    NotMember,
    #[error("coefficient vector does not solve the system: {0}")]
    InvalidSolution(String),
    #[error("generators are not relatively prime (gcd = {0})")]
    NotCoprime(u64),
    #[error("search box of {0} cells exceeds the supported size")]
    BoxTooLarge(u128),
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
