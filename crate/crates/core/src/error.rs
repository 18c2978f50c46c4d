use thiserror::Error;

/// Errors raised by the zero computation and its verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {name} = {value} is out of range: must be {bound}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        bound: &'static str,
    },

    #[error("degree must be at least 1, got {0}")]
    InvalidDegree(usize),

    #[error("point {index} = {value} is not admissible: {reason}")]
    DomainViolation {
        index: usize,
        value: f64,
        reason: &'static str,
    },

    #[error("negated Hessian is not numerically positive definite")]
    FactorizationFailure,

    #[error("line search stalled after {backtracks} backtracks")]
    LineSearchStalled { backtracks: usize },

    #[error("newton iteration {iteration} failed: {source}")]
    Iteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("polynomial derivative vanishes at zero {index} (x = {value})")]
    DerivativeVanishes { index: usize, value: f64 },

    #[error("invalid solver settings: {0}")]
    InvalidSettings(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
