use thiserror::Error;

/// Error type shared by the numerics, the model registry, and the simulators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (max deviation from U*U^dag = I is {0:.3e})")]
    NotUnitary(f64),
    #[error("iteration did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid inverse temperature {0}: expected beta >= 0 (or +inf)")]
    InvalidBeta(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("temperature {0} lies outside the tabulated range [0, {1}]")]
    OutOfTableRange(f64, f64),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("entropy change must be non-positive, got {0}")]
    PositiveEntropyChange(f64),
    #[error("Fock truncation still unconverged at dimension {0}")]
    TruncationUnconverged(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
