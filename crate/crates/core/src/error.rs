use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuakeError {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("point {0} is not inside the open unit disk")]
    OutsideDisk(String),
    #[error("invalid quadruple: {0}")]
    InvalidQuadruple(String),
    #[error("geodesics {first} and {second} cross")]
    Crossing { first: usize, second: usize },
    #[error("geodesics cross; distance is undefined")]
    CrossingPair,
    #[error("atom {index} has weight {weight}, below the minimum")]
    BadWeight { index: usize, weight: f64 },
    #[error("stratum signature is not realizable: {0}")]
    Unrealizable(String),
    #[error("circle map is not monotone: {0}")]
    NonMonotone(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sequence has no limit: {0}")]
    NoLimit(String),
    #[error("solver did not converge after {iterations} iterations (residual trace {trace:?})")]
    NoConvergence { iterations: usize, trace: Vec<f64> },
    #[error("singular sample: {0}")]
    Singular(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("generator gave up: {0}")]
    Generator(String),
}

pub type Result<T> = std::result::Result<T, QuakeError>;
