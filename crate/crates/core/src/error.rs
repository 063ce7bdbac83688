use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex sets are not disjoint: {0}")]
    DisjointnessViolation(String),
    #[error("face not found: {0}")]
    FaceNotFound(String),
    #[error("not a pseudomanifold: ridge {0} lies in three or more facets")]
    NotPseudomanifold(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("shelling order is not a permutation of the facets: {0}")]
    InvalidOrder(String),
    #[error("simplex {0} has no facet on the ball boundary")]
    NoBoundaryContact(String),
    #[error("ball is a single simplex ({0})")]
    SingleSimplexBall(String),
    #[error("family is not compatible: {0}")]
    IncompatibleFamily(String),
    #[error("balls overlap in the top-dimensional simplex {0}")]
    BallOverlap(String),
    #[error("expected {expected} choice bits, got {got}")]
    ChoiceLengthMismatch { expected: usize, got: usize },
    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),
    #[error("input is not symmetric: {0}")]
    SymmetryViolation(String),
    #[error("lift construction failed verification: {0}")]
    LiftConstructionFailed(String),
    #[error("no certified epsilon 2^-t for t <= {0}")]
    EpsSearchExhausted(u32),
    #[error("degenerate cell: {0}")]
    DegenerateCell(String),
    #[error("center raise too large: {0}")]
    DeltaTooLarge(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("could not parse input: {0}")]
    InputParseError(String),
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InputParseError(e.to_string())
    }
}
