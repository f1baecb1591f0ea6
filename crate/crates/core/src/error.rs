use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("eigenvectors are not orthonormal")]
    NotOrthonormal,
    #[error("Kraus operators are not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),
    #[error("a channel needs at least one Kraus operator")]
    EmptyChannel,
    #[error("inverse temperature must be finite and positive, got {0}")]
    InvalidBeta(f64),
    #[error("field must be finite and positive, got {0}")]
    InvalidField(f64),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("brute-force enumeration limited to dimension {max}, got {found}")]
    DimensionTooLarge { max: usize, found: usize },
    #[error("spin direction must be a unit vector (norm {0})")]
    NonUnitVector(f64),
    #[error("cycle does not operate as an engine")]
    NotAnEngine,
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
