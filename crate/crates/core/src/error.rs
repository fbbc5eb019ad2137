//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max entrywise deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NonPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    NonUnitTrace { trace: f64 },

    #[error("state vector norm is {norm}, expected 1")]
    NonUnitNorm { norm: f64 },

    #[error("subsystem index {index} is invalid for a space with {count} subsystems")]
    BadSubsystemIndex { index: usize, count: usize },

    #[error("measured subsystem has dimension {dim}, expected a qubit")]
    NotAQubit { dim: usize },

    #[error("expected a two-qubit state, got subsystem dimensions {dims:?}")]
    NotTwoQubits { dims: Vec<usize> },

    #[error("measurement basis is incomplete or not orthonormal")]
    IncompleteBasis,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("total dimension {total} exceeds the supported maximum {max}")]
    DimTooLarge { total: usize, max: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("state spec: {0}")]
    SpecParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
