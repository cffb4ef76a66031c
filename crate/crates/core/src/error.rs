use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the zero polynomial has no roots to count")]
    ZeroPolynomial,
    #[error("polynomials over different variables: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}
