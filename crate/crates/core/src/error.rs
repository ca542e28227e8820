use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operands live over different coefficient fields or algebras")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable capacity exceeded: {0}")]
    Capacity(String),
    #[error("entry is not supported on slot 0")]
    NotSlotZero,
    #[error("matrix is not a Segre matrix: {0}")]
    NotSegre(String),
    #[error("specialization point makes the discriminant vanish")]
    DegenerateSpecialization,
    #[error("gave up after {0} attempts")]
    RetryExhausted(usize),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("unsupported divisor: {0}")]
    UnsupportedDivisor(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no suitable differential found: {0}")]
    NoDifferential(String),
    #[error("function is outside the domain of the functional")]
    OutsideDomain,
    #[error("evaluation at a pole")]
    Pole,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
