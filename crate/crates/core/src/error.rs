use thiserror::Error;

pub type Result<T, E = BprError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum BprError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("every type assigns zero likelihood to the observed signal")]
    AllLikelihoodsZero,

    #[error("cannot average an empty sequence")]
    EmptySequence,

    #[error("invalid belief: {0}")]
    InvalidBelief(String),

    #[error("signal does not match model family: expected {expected}, got {actual}")]
    FamilyMismatch {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("signal outside the trained signal space: {0}")]
    SignalOutOfSpace(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain failure: {0}")]
    DomainFailure(String),

    #[error("kernel matrix is not positive definite")]
    SingularKernel,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("knowledge base schema mismatch: {0}")]
    SchemaVersionMismatch(String),
}
