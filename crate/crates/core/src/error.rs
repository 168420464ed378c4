use thiserror::Error;

/// Errors raised by the algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("torus elements live over different skew forms")]
    ContextMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("the zero element has no leading term")]
    ZeroElement,

    #[error("not divisible within cap ({steps} elimination steps)")]
    NotDivisible { steps: usize },

    #[error("index {index} out of range (expected < {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("exchange graph has an oriented cycle")]
    NotAcyclic,

    #[error("linear order is not compatible with the exchange matrix: {0}")]
    IncompatibleOrder(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("expansion did not terminate within {0} steps")]
    ExpansionCap(usize),

    #[error("Laurent coefficient division is not exact")]
    InexactCoefficient,

    #[error("triangular recursion failed: {0}")]
    Recursion(String),
}

pub type Result<T> = std::result::Result<T, Error>;
