use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("graph is disconnected: dart {dart} is not reachable from dart 1")]
    DisconnectedGraph { dart: usize },
    #[error("vertex v{vertex} is univalent")]
    UnivalentVertex { vertex: usize },
    #[error("relative structure incompatible at vertex v{vertex}: {reason}")]
    RelativeIncompatibility { vertex: usize, reason: String },
    #[error("genus is not a non-negative integer (chi={chi}, b={boundaries})")]
    NonIntegerGenus { chi: i64, boundaries: usize },
    #[error("edge subset is empty")]
    EmptySubset,
    #[error("edge e{edge} is not a multiple of the unit {unit}")]
    IndivisibleLength { edge: usize, unit: String },
    #[error("walk starts at a vertex; a starting dart is required")]
    MissingDirection,
    #[error("edge e{edge} is not on A")]
    NotOnA { edge: usize },
    #[error("face F{face} is an A-face and cannot carry a sign")]
    SignOnAFace { face: usize },
    #[error("lengths have no practical common unit")]
    IncommensurableLengths,
    #[error("property does not hold: {0}")]
    PropertyDoesNotHold(String),
    #[error("epsilon {eps} is too large for edge e{edge}")]
    EpsilonTooLarge { eps: String, edge: usize },
    #[error("vertex v{vertex} lies on A")]
    VertexOnA { vertex: usize },
    #[error("malformed targets: {0}")]
    MalformedTargets(String),
    #[error("length system is infeasible")]
    InfeasibleLengths,
    #[error("voltage assignment gives a disconnected cover")]
    DisconnectedCover,
    #[error("post-check failed: {0}")]
    PostCheckFailed(String),
    #[error("mixed walk stage {stage} ends at vertex v{vertex} of the next level")]
    VertexLanding { stage: usize, vertex: usize },
    #[error("lengths and delta values have no practical common unit")]
    IncommensurableData,
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("orbit mismatch: {0}")]
    SpecOrbitMismatch(String),
    #[error("line {line}: syntax error: {msg}")]
    SyntaxError { line: usize, msg: String },
    #[error("line {line}: unknown id {id}")]
    UnknownId { line: usize, id: String },
    #[error("line {line}: duplicate id {id}")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: length must be positive")]
    NonPositiveLength { line: usize },
    #[error("invalid orbit spec: {0}")]
    InvalidOrbitSpec(String),
    #[error("invalid attachment: {0}")]
    InvalidAttachment(String),
}
