use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("q parameter mismatch between operands")]
    ParameterMismatch,
    #[error("letter {letter} out of range 1..={n}")]
    LetterOutOfRange { letter: u32, n: usize },
    #[error("family {family} does not apply to a {kind} element")]
    FamilyMismatch { family: String, kind: String },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("Fock truncation exceeded: {0}")]
    Truncation(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn limit(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }
}
