use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid multiplication table for factor `{factor}`: {reason}")]
    InvalidTable { factor: String, reason: String },
    #[error("generating system is not symmetric: {0}")]
    NonSymmetricSystem(String),
    #[error("factor `{0}` is trivial")]
    TrivialFactor(String),
    #[error("relators not closed under inversion and cyclic shifts")]
    RelatorsNotClosed,
    #[error("factor entry {0} must be an object with `id` and `kind`")]
    FactorNotObject(usize),
    #[error("operation requires the {expected} backend")]
    BackendMismatch { expected: &'static str },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown factor `{0}`")]
    UnknownFactor(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("cone vertex cannot appear in a graph without cones")]
    ConeVertexInPlainGraph,
    #[error("cone vertex of an infinite coset needs an exploration budget")]
    ExplorationBudgetExceeded,
    #[error("exploration budget exceeded ({0} vertices)")]
    BudgetExceeded(usize),
    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(i64),
    #[error("target not within cap {0}")]
    NotWithinCap(usize),
    #[error("coset key could not be decided within budget")]
    CosetKeyUnknown,
    #[error("dangling cone edge at position {0}")]
    DanglingConeEdge(usize),
    #[error("cone-biedge at position {0} joins a vertex to itself")]
    ZeroBiedge(usize),
    #[error("path is not contiguous at edge {0}")]
    BrokenPath(usize),
    #[error("path has an edge not allowed in this graph at position {0}")]
    WrongGraph(usize),
    #[error("Y is not reduced: its elements must lie in distinct right cosets")]
    YNotReduced,
    #[error("y and y' lie in the same right coset")]
    SameCoset,
    #[error("enumeration truncated at {0} elements")]
    EnumerationTruncated(usize),
    #[error("word is not certified trivial within budget")]
    NotTrivialWithinBudget,
    #[error("area exceeds cap {0}")]
    AreaCapExceeded(usize),
    #[error("no replacement path for cone-biedge at position {0} within bound")]
    ReplacementNotFound(usize),
    #[error("geodesic enumeration truncated at {0} paths")]
    GeodesicEnumerationTruncated(usize),
    #[error("element {0} unreachable in the inner relative graph")]
    GenerationFailure(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
