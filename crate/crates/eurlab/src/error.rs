use thiserror::Error;

/// Errors produced by state validation, measurement construction and the
/// numerical searches.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^dag| = {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not skew-symmetric (max |S + S^T| = {0:.3e})")]
    NotSkew(f64),

    #[error("matrix has eigenvalue {0:.3e} below the PSD clip threshold")]
    NegativeEigenvalue(f64),

    #[error("trace is {0}, expected 1")]
    NotUnitTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("Bloch radius {0} outside [0, 1]")]
    RadiusOutOfRange(f64),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid projective measurement: {0}")]
    InvalidMeasurement(String),

    #[error("expected dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("optimization failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("no unbiased pure state available: {0}")]
    UnbiasedStateUnavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
