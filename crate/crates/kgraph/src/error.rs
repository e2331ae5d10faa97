use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("colour {colour} out of range 1..={rank}")]
    ColourOutOfRange { colour: usize, rank: usize },
    #[error("malformed square {a} {b} = {c} {d}: {reason}")]
    MalformedSquare {
        a: String,
        b: String,
        c: String,
        d: String,
        reason: String,
    },
    #[error("expected rank {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("word not composable at position {position}")]
    NotComposable { position: usize },
    #[error("no factorisation rule for the bicoloured word `{0} {1}`")]
    MissingRule(String, String),
    #[error("paths have different range vertices")]
    RangeMismatch,
    #[error("paths do not share both endpoints")]
    EndpointMismatch,
    #[error("segment bounds out of range")]
    OutOfRange,
    #[error("degrees overlap in colour {colour}")]
    DegreeOverlap { colour: usize },
    #[error("path is not a cycle")]
    NotACycle,
    #[error("skeleton has a cycle through `{0}`")]
    HasCycle(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("quotient skeleton rejected by the validator: {0}")]
    QuotientNotAccepted(String),
    #[error("vertex set is not hereditary")]
    NotHereditary,
    #[error("skeleton is not locally convex")]
    NotLocallyConvex,
    #[error("rank {0} is not supported by this computation")]
    UnsupportedRank(usize),
    #[error("degree map is not surjective on colours")]
    NotSurjective,
    #[error("window is empty")]
    EmptyWindow,
    #[error("input was not produced by the length-functor construction")]
    NotExample42Graph,
    #[error("functor is not defined on edge `{0}`")]
    FunctorIncomplete(String),
    #[error("functor violates square compatibility on `{0} {1} = {2} {3}`")]
    FunctorIncompatible(String, String, String, String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
