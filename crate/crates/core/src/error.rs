use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("function has a fixed point at {0}")]
    FixedPoint(usize),

    #[error("function is not injective on the window: f({0}) = f({1})")]
    NotInjective(usize, usize),

    #[error("length mismatch: got {got} values, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("window size must be positive")]
    EmptyWindow,

    #[error("set is not strictly increasing at position {0}")]
    UnsortedSet(usize),

    #[error("element {element} lies outside the window [0, {window})")]
    OutsideWindow { element: usize, window: usize },

    #[error("exact search is capped at {cap} points, got {got}")]
    CapExceeded { cap: usize, got: usize },

    #[error("color {0} is not in {{0, 1, 2}}")]
    BadColor(u8),

    #[error("colorings disagree on window size ({0} vs {1})")]
    WindowMismatch(usize, usize),

    #[error("involution is malformed at {0}")]
    BadInvolution(usize),

    #[error("expected exactly one fixed point, found {0}")]
    FixedPointCount(usize),

    #[error("block {index} has even size {size}")]
    EvenBlock { index: usize, size: usize },

    #[error("interval partition endpoints must start at 0 and strictly increase")]
    BadEndpoints,

    #[error("partition part {0} is empty")]
    EmptyPart(usize),

    #[error("{0}")]
    Precondition(String),

    #[error("no in-window edge inside the set beyond position {0}")]
    NoEdge(usize),

    #[error("value {value} at position {position} is not below its bound {bound}")]
    BoundViolation { position: usize, value: u64, bound: u64 },

    #[error("invalid rational {0:?}")]
    BadRational(String),

    #[error("block {0} is too large to address")]
    BlockTooLarge(usize),

    #[error("set is not a selector: block {0} holds more than one point")]
    NotSelector(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
