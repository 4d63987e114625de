use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus {0} is too small, need at least 2")]
    ModulusTooSmall(u64),
    #[error("modulus {0} exceeds 2^32")]
    ModulusTooLarge(u64),
    #[error("ring {0} needs at least 3 regular elements")]
    InsufficientRegularElements(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("exponent overflow: degree {0} exceeds 255")]
    DegreeOverflow(usize),
    #[error("matrix is singular over the ring (determinant is not regular)")]
    SingularMatrix,
    #[error("dimension {actual} too small, need at least {min}")]
    DimensionTooSmall { min: usize, actual: usize },
    #[error("ring {0} is not a field")]
    NotAField(String),
    #[error("instance too large for exhaustive search: {0} vertices")]
    TooLarge(u64),
    #[error("colour {0} is not a regular element")]
    NotRegularColour(u64),
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("stability violation: {context} has degree {degree} > 3")]
    StabilityViolation { context: String, degree: usize },
    #[error("collision maps differ between the two parties")]
    CollisionMismatch,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
