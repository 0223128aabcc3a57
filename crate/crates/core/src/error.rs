use thiserror::Error;

/// Errors raised by the library. Absence of a Frobenius witness and failing
/// Lemma hypotheses are values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} = {value} exceeds the configured maximum {max}")]
    LimitExceeded { what: &'static str, value: u128, max: u128 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("partitions of different integers: {0} and {1}")]
    MismatchedSize(usize, usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid Frobenius witness: {0}")]
    InvalidWitness(String),
    #[error("hypotheses not satisfied: {0}")]
    HypothesisFailure(String),
    #[error("spectral splitting degenerate after {retries} retries (last seed {last_seed}); re-seed")]
    SplittingDegenerate { retries: u32, last_seed: u64 },
    #[error("coordinate {0} outside [0, 1]")]
    OutOfRange(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
