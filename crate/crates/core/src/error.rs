use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph contains a directed cycle")]
    CycleDetected,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("solution has {found} paths but the instance has {expected} demands")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("{pairs} demand pairs exceed the solver cap of {cap}")]
    LimitExceeded { pairs: usize, cap: usize },
    #[error("oracle search space of {combinations} path combinations exceeds the bound {bound}")]
    OracleTooLarge { combinations: u128, bound: u128 },
    #[error("terminals are not isolated: {0}")]
    TerminalsNotIsolated(String),
    #[error("projected solution failed re-verification: {0}")]
    ProjectionInvalid(String),
    #[error("swap context invalid: {0}")]
    ContextInvalid(String),
    #[error("no donor path found: {0}")]
    NoDonorFound(String),
    #[error("pattern graph is not cubic and bipartite: {0}")]
    PatternNotCubicBipartite(String),
    #[error("color class {0} is empty")]
    ColorMissing(usize),
    #[error("witness invalid: {0}")]
    WitnessInvalid(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
