use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("colon by the zero ideal")]
    ZeroDivisorIdeal,
    #[error("ideal is not cofinite: some coordinate axis carries no pure power")]
    NotCofinite,
    #[error("operation undefined on the zero ideal")]
    ZeroIdeal,
    #[error("exact geometry is supported for dimension at most 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("weight vector has a negative entry")]
    NegativeWeight,
    #[error("complement of the polyhedron in the orthant is unbounded")]
    UnboundedComplement,
    #[error("region has no points in the scan box")]
    EmptyRegion,
    #[error("scale factor must be positive")]
    NonpositiveScale,
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("system is not region-expressible: {0}")]
    NotRegionExpressible(String),
    #[error("ideal is zero at index {0:?} along the requested direction")]
    ZeroIdealInDirection(Vec<i64>),
    #[error("evaluation outside the function's domain: {0}")]
    EvaluationOutOfDomain(String),
    #[error("invalid piecewise-linear function: {0}")]
    InvalidFunction(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub(crate) fn dims(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// Attaches a file name to parse and I/O errors.
    pub fn in_file(self, path: &str) -> Self {
        match self {
            Error::Parse { line, msg } => Error::Io { path: path.to_string(), msg: format!("line {line}: {msg}") },
            Error::Io { path: inner, msg } => Error::Io { path: format!("{path} -> {inner}"), msg },
            other => other,
        }
    }
}
