use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("cell ({i},{j}) is not valid for rank {n}")]
    InvalidCell { n: usize, i: usize, j: usize },
    #[error("fundamental coordinates must be nonnegative, got {0:?}")]
    NegativeWeight(Vec<i64>),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("triangle is not in the polytope for this weight")]
    NotInPolytope,
    #[error("invalid Gelfand-Tsetlin pattern: {0}")]
    InvalidPattern(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent representation: {0}")]
    Representation(String),
    #[error("invalid word for basis policy: {0}")]
    Policy(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
