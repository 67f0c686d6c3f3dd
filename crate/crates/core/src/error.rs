use thiserror::Error;

/// Errors raised by the library. Failures that are part of a verdict (an axiom
/// that does not hold, a non-modular flat) are returned as data instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground sets differ: {left} vs {right} elements")]
    GroundMismatch { left: usize, right: usize },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("ground set too large: {0} elements (limit {1})")]
    TooManyElements(usize, usize),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("map is not order preserving: {0}")]
    NotOrderPreserving(String),
    #[error("set is not an order ideal: {0}")]
    NotAnIdeal(String),
    #[error("`{0}` is not a flat")]
    NotAFlat(String),
    #[error("flat {flat} is not modular (witness Z = {z}, Y = {y})")]
    NotModular { flat: String, z: String, y: String },
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("`{0}` is not a tope")]
    NotATope(String),
    #[error("`{0}` is not a covector")]
    NotACovector(String),
    #[error("tope set is not convex")]
    NotConvex,
    #[error("degenerate arrangement: {0}")]
    DegenerateArrangement(String),
    #[error("not a matching: {0}")]
    NotAMatching(String),
    #[error("complex is not pure: {0}")]
    NotPure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
