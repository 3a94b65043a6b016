use thiserror::Error;

/// Errors reported by the engine. Mathematical "failures" that the theory
/// treats as data (Jacobi violations, nonzero d∘d residuals) are returned as
/// reports, not as `Error`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {context}: {reason}")]
    Parse { context: String, reason: String },

    #[error("basis index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("parameter `{0}` has no assigned value")]
    MissingParameter(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("space mismatch: expected {expected} element, got {got}")]
    SpaceMismatch { expected: String, got: String },

    #[error("side mismatch: {0}")]
    SideMismatch(String),

    #[error("left argument of the bracket must be homogeneous, got degrees {0:?}")]
    InhomogeneousLeftArgument(Vec<usize>),

    #[error("matrix shapes do not compose: {0}")]
    ShapeMismatch(String),

    #[error("not a complex at degree {degree}: {residual}")]
    NotAComplex { degree: i64, residual: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
