use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial must be monic: {0}")]
    NotMonic(String),

    #[error("polynomial must be nonconstant")]
    Constant,

    #[error("residues belong to different moduli")]
    ContextMismatch,

    #[error("root finder did not converge after {iterations} iterations (max residual {residual:e})")]
    RootsNotConverged { iterations: usize, residual: f64 },

    #[error("invalid digit set: {0}")]
    InvalidDigits(String),

    #[error("digit {0} is not in the digit set")]
    DigitNotInSet(i64),

    #[error("expansion entered a cycle at state {state:?} after {steps} steps")]
    Cycle { state: Vec<String>, steps: usize },

    #[error("expansion exceeded the step cap of {cap} (last state {state:?})")]
    StepCap { cap: usize, state: Vec<String> },

    #[error("inconclusive: budget ({estimated} states estimated, budget {budget})")]
    Budget { estimated: f64, budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("element is zero; logarithmic length undefined")]
    ZeroElement,

    #[error("degenerate deviation: D = {0}")]
    DegenerateDeviation(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no integer part candidate found within the search radius")]
    NoCandidate,

    #[error("insufficient depth: scale {scale} needs tile depth at least {needed}")]
    InsufficientDepth { scale: u32, needed: u32 },

    #[error("empty point set")]
    EmptyPoints,
}

pub type Result<T> = std::result::Result<T, Error>;
