use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("leading term of the zero polynomial")]
    ZeroPolynomial,
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} does not fit in a machine word prime field")]
    CharacteristicTooLarge(u64),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("ideal is not proper")]
    ImproperIdeal,
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    RaggedMatrix { row: usize, expected: usize, found: usize },
    #[error("morphism is not well defined")]
    IllDefinedMorphism,
    #[error("composition of the complex maps is nonzero")]
    NotAComplex,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
