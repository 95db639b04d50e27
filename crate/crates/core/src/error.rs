use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("conductor must be positive, got {0}")]
    InvalidConductor(u32),
    #[error("mixed conductors: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid cocycle data: {0}")]
    Cocycle(String),
    #[error("degree {0} must not lie in rad f for an inner derivation")]
    InnerInRadical(String),
    #[error("degree {0} must lie in rad f for D(u, r)")]
    OuterNotInRadical(String),
    #[error("B-basis index z^{0} is not available in this coefficient algebra")]
    BIndex(i64),
    #[error("coefficient algebra mismatch")]
    BMismatch,
    #[error("invalid coefficient algebra: {0}")]
    BAlgebra(String),
    #[error("gl_n module error: {0}")]
    Gln(String),
    #[error("module parameter error: {0}")]
    Module(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
