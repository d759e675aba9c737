use thiserror::Error;

/// Errors raised by graph construction and the emulator pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rotation system fails the Euler check: V - E + F = {euler} on a component")]
    NonPlanarEmbedding { euler: i64 },
    #[error("edge {edge} has negative or non-finite weight {weight}")]
    NegativeWeight { edge: usize, weight: f64 },
    #[error("input graph is disconnected ({components} components)")]
    DisconnectedInput { components: usize },
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("vertex {t} is unreachable from {s}")]
    Unreachable { s: usize, t: usize },
    #[error("path endpoints do not lie on the cut faces")]
    PathNotOnOuterStructure,
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("terminal pairs cross: ({0}, {1}) and ({2}, {3})")]
    CrossingPairs(usize, usize, usize, usize),
    #[error("invalid portal set: {0}")]
    InvalidPortalSet(String),
    #[error("inconsistent copy labels: {0}")]
    InconsistentCopyLabels(String),
    #[error("no balanced terminal pair exists for r = {0}")]
    NoBalancedPair(usize),
    #[error("cluster hierarchy is inconsistent: {0}")]
    HierarchyInconsistent(String),
    #[error("no decomposition meets both the distortion budget and the size contract")]
    NoFeasibleDecomposition,
    #[error("distortion {measured} exceeds budget {budget}")]
    DistortionBudgetExceeded { measured: f64, budget: f64 },
    #[error("split endpoints lie on the same hole")]
    SameHoleEndpoints,
    #[error("path passes through terminal {0} in its interior")]
    TerminalOnPathInterior(usize),
    #[error("r = {0} is too small for an r-division (need r >= 16)")]
    RTooSmall(usize),
    #[error("k = {k} exceeds the bootstrap bound {bound}")]
    PreconditionKTooLarge { k: usize, bound: usize },
    #[error("unknown terminal {0}")]
    UnknownTerminal(usize),
    #[error("terminal sets differ between original and emulator")]
    TerminalMismatch,
    #[error("bad generator spec: {0}")]
    BadSpec(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
