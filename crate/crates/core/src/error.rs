use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty shape")]
    EmptyShape,

    #[error("site {0} is not a member of the shape")]
    NotInShape(String),

    #[error("size {k} exceeds the enumeration cap {cap} for d = {dim}")]
    CapExceeded { k: usize, cap: usize, dim: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("heterogeneous shape collection: {0}")]
    Heterogeneous(String),

    #[error("covariance matrix is not positive semidefinite (pivot {pivot:.3e})")]
    Indefinite { pivot: f64 },

    #[error("problem dimension {0} exceeds 64; decompose the event into smaller blocks")]
    TooManyVariables(usize),

    #[error("circulant embedding has eigenvalue {min_eigenvalue:.3e}; increase the padding")]
    EmbeddingFailed { min_eigenvalue: f64 },

    #[error("model does not support this operation: {0}")]
    Unsupported(String),

    #[error("subwindow is not strictly inside the window")]
    SubwindowOutside,
}

pub type Result<T> = std::result::Result<T, Error>;
