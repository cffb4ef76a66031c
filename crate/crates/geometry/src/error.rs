use cq_core::ArithError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("expected a basis of rank {expected}, found rank {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("{0} out of range")]
    OutOfRange(String),
    #[error("pencil members are proportional")]
    Proportional,
    #[error("degenerate family: {0}")]
    Degenerate(String),
    #[error("class is not effective")]
    NotEffective,
    #[error("the zero class has no chamber")]
    ZeroClass,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("test curves do not span the curve space")]
    NonSpanning,
    #[error("inconsistent pairing data")]
    Inconsistent,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
