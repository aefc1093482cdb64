use thiserror::Error;

/// Errors raised by graph construction, spectral computations and bound checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("{0}-{1} is not an edge of the graph")]
    NotAnEdge(usize, usize),

    #[error("empty vertex set")]
    EmptySet,

    #[error("vertex set must be a nonempty proper subset of the vertices")]
    TrivialCut,

    #[error("graph is not unicyclic: {0}")]
    NotUnicyclic(String),

    #[error("graph is not a tree: {0}")]
    NotATree(String),

    #[error("graph has no edges")]
    Edgeless,

    #[error("matrix has a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("vector has zero norm")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("inequality violated: {0}")]
    Violated(String),

    #[error("size {n} exceeds the cap of {cap} for {what}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("random regular generator gave up after {0} attempts")]
    AttemptsExhausted(usize),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that mean "the theorem does not apply here" rather than "the check failed".
    pub fn is_hypothesis(&self) -> bool {
        matches!(self, Error::HypothesisNotMet(_))
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::HypothesisNotMet(msg.into())
    }
}
