use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate filtration range [{min}, {max}]")]
    DegenerateRange { min: f64, max: f64 },
    #[error("coordinate {value} lies outside the filtration range [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },
    #[error("invalid cornerpoint ({birth}, {death}) with multiplicity {multiplicity}")]
    InvalidCornerpoint { birth: f64, death: f64, multiplicity: u32 },
    #[error("empty input")]
    EmptyInput,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid level pair: u = {u} must be below v = {v}")]
    InvalidPair { u: f64, v: f64 },
    #[error("invalid epsilon: {0}")]
    InvalidEpsilon(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point ({u}, {v}) lies outside the triangle 0 <= u <= v <= 1")]
    Domain { u: f64, v: f64 },
    #[error("diagram contains cornerlines; finitize it first")]
    NotFinitized,
    #[error("cornerpoint count is zero but symmetric functions are nonzero")]
    InvalidCount,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("instance of size {size} exceeds the brute-force limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("weights must be nonnegative with a positive sum")]
    InvalidWeights,
    #[error("distance matrix has no class labels")]
    MissingLabels,
    #[error("{0} is undefined for this label set")]
    UndefinedMetric(&'static str),
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short stable identifier for machine-readable error reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateRange { .. } => "degenerate-range",
            Error::OutOfRange { .. } => "out-of-range",
            Error::InvalidCornerpoint { .. } => "invalid-cornerpoint",
            Error::EmptyInput => "empty-input",
            Error::InvalidGraph(_) => "invalid-graph",
            Error::InvalidPair { .. } => "invalid-pair",
            Error::InvalidEpsilon(_) => "invalid-epsilon",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Domain { .. } => "domain",
            Error::NotFinitized => "not-finitized",
            Error::InvalidCount => "invalid-count",
            Error::Dimension { .. } => "dimension",
            Error::TooLarge { .. } => "size",
            Error::Config(_) => "config",
            Error::InvalidWeights => "invalid-weights",
            Error::MissingLabels => "missing-labels",
            Error::UndefinedMetric(_) => "undefined-metric",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
