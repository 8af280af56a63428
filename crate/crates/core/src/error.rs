use thiserror::Error;

/// Errors raised across the library. Numeric "infinities" (divergences on
/// mismatched supports) are values, never errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("element {0} has no inverse mod {1}")]
    ZeroElement(u64, u64),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("parameter matrix is not invertible mod {d} (det = {det})")]
    NotInvertible { d: u64, det: u64 },
    #[error("parameter matrix has an entry divisible by {0}")]
    NotPositive(u64),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("function undefined at eigenvalue {0:e}")]
    DomainError(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid convolution spec: {0}")]
    InvalidSpec(String),
    #[error("invalid stabilizer group: {0}")]
    InvalidGroup(String),
    #[error("unsupported scale: {0}")]
    UnsupportedScale(String),
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
    #[error("characteristic value {0:.3e} away from a root of unity")]
    PhaseNotRoot(f64),
    #[error("state is rank deficient (min eigenvalue {0:e})")]
    RankDeficient(f64),
    #[error("Weyl-orbit ensemble not covariant: {0}")]
    CovarianceViolation(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
