use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hyperedge with no vertices")]
    EmptyEdge,
    #[error("multiplicity {multiplicity} is not a nonzero residue mod {dim}")]
    BadMultiplicity { multiplicity: u64, dim: u32 },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {vertex} repeated within one set")]
    RepeatedVertex { vertex: usize },
    #[error("local dimension must be at least 2, got {0}")]
    BadDimension(u32),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{what}: size {size} exceeds budget {limit}")]
    BudgetExceeded { what: &'static str, size: u64, limit: u64 },
    #[error("vertex {vertex} is not covered")]
    NotACover { vertex: usize },
    #[error("set {set:?} is not independent")]
    NotIndependent { set: Vec<usize> },
    #[error("independent sets must be nonempty")]
    EmptySet,
    #[error("invalid weights: {0}")]
    BadWeights(String),
    #[error("cover strength is zero")]
    ZeroStrength,
    #[error("fractional coloring covers vertex {vertex} with total weight below 1")]
    InfeasibleColoring { vertex: usize },
    #[error("spectral gap must lie in (0, 1], got {0}")]
    BadNu(String),
    #[error("count undefined: {0}")]
    BadGap(String),
    #[error("hypergraph order must be at least 2, got {0}")]
    BadOrder(u32),
    #[error("integer result is not stable under rounding: {0}")]
    Unstable(String),
    #[error("support size {g} is below the stabilizer minimum 2^{n}")]
    BadSupport { g: String, n: usize },
    #[error("hyperedge of order {0} exceeds the supported maximum of 3")]
    OrderTooHigh(usize),
    #[error("operation requires qubits (d = 2), got d = {0}")]
    NotQubit(u32),
    #[error("invalid outcome: {0}")]
    BadOutcome(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("json error: {0}")]
    Json(String),
}

impl Error {
    /// Stable machine-readable code used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyEdge => "EmptyEdge",
            Error::BadMultiplicity { .. } => "BadMultiplicity",
            Error::VertexOutOfRange { .. } => "VertexOutOfRange",
            Error::RepeatedVertex { .. } => "RepeatedVertex",
            Error::BadDimension(_) => "BadDimension",
            Error::BadParams(_) => "BadParams",
            Error::Parse { .. } => "Parse",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::NotACover { .. } => "NotACover",
            Error::NotIndependent { .. } => "NotIndependent",
            Error::EmptySet => "EmptySet",
            Error::BadWeights(_) => "BadWeights",
            Error::ZeroStrength => "ZeroStrength",
            Error::InfeasibleColoring { .. } => "InfeasibleColoring",
            Error::BadNu(_) => "BadNu",
            Error::BadGap(_) => "BadGap",
            Error::BadOrder(_) => "BadOrder",
            Error::Unstable(_) => "Unstable",
            Error::BadSupport { .. } => "BadSupport",
            Error::OrderTooHigh(_) => "OrderTooHigh",
            Error::NotQubit(_) => "NotQubit",
            Error::BadOutcome(_) => "BadOutcome",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }

    /// Errors caused by bad user input, as opposed to resource limits or IO.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
