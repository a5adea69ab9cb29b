use thiserror::Error;

/// Errors raised by tensor construction, expression execution and planning.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{structure} has no {operation}")]
    MissingOperation {
        structure: String,
        operation: &'static str,
    },

    #[error("dimension {index} has size 0")]
    ZeroDimension { index: usize },

    #[error("tensor with dims {dims:?} has more elements than fit in a usize")]
    TooLarge { dims: Vec<usize> },

    #[error("expected {expected} symmetry tags, got {got}")]
    SymmetryLength { expected: usize, got: usize },

    #[error("last dimension must be tagged NS")]
    SymmetryOnLastDimension,

    #[error("symmetric pair at dimensions {first} and {second} has mismatched sizes {left} and {right}")]
    SymmetricDimensionMismatch {
        first: usize,
        second: usize,
        left: usize,
        right: usize,
    },

    #[error("symmetry group starting at dimension {start} mixes different tags")]
    MixedSymmetryGroup { start: usize },

    #[error("dense tensors need a structure with an additive identity")]
    DenseWithoutIdentity,

    #[error("index {index} out of range for tensor of {size} elements")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("index tuple {tuple:?} does not match dims {dims:?}")]
    BadIndexTuple { tuple: Vec<usize>, dims: Vec<usize> },

    #[error("index {tuple:?} is not in canonical (sorted) order for a symmetric tensor")]
    NonCanonicalIndex { tuple: Vec<usize> },

    #[error("index {tuple:?} lies on a diagonal that is forced to the additive identity")]
    ForcedZeroDiagonal { tuple: Vec<usize> },

    #[error("operation requires a sparse tensor")]
    NotSparse,

    #[error("density {0} is outside (0, 1]")]
    InvalidDensity(f64),

    #[error("structure has no magnitude map, norms are undefined")]
    NoMagnitude,

    #[error("malformed expression: {0}")]
    MalformedExpression(String),

    #[error("index '{index}' has size {left} in one tensor and {right} in another")]
    IndexSizeMismatch { index: char, left: usize, right: usize },

    #[error("non-distributive functions are not supported")]
    NonDistributive,

    #[error("plan does not match expression: {0}")]
    PlanMismatch(String),

    #[error("no processor grid satisfies the memory limit of {memory} elements")]
    NoFeasibleGrid { memory: f64 },

    #[error("zero on the diagonal at row {0}")]
    ZeroDiagonal(usize),

    #[error("zero denominator at {0:?}")]
    ZeroDenominator(Vec<usize>),

    #[error("did not converge within {0} iterations")]
    NotConverged(usize),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
