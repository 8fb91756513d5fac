use thiserror::Error;

use crate::kernel::Diagnostic;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("rule {}: {}", .0.rule, .0.kind)]
    InvalidProgram(Diagnostic),
    #[error("penalty of {atom} must be positive, got {penalty}")]
    NonPositivePenalty { atom: String, penalty: f64 },
    #[error("duplicate hypothesis {0}")]
    DuplicateHypothesis(String),
    #[error("arity conflict on {atom}: predicate previously used with arity {expected}")]
    ArityConflict { atom: String, expected: usize },
    #[error("{0} is not a hypothesis of the instance")]
    NotAHypothesis(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("rule {rule}: {message} under substitution {{{substitution}}}")]
    Arithmetic {
        rule: usize,
        substitution: String,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("capacity exceeded: search visited more than {cap} nodes (raise the node cap)")]
    Capacity { cap: u64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("cost `{cost}` requires penalties in (0, 1], got {penalty}")]
    Domain { cost: &'static str, penalty: f64 },
    #[error("max_cost is only available for monotone cost functions, `{0}` is not")]
    NonMonotone(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(
        "{count} hypotheses exceed the exhaustive enumeration cap of {cap}; use `solve` instead"
    )]
    TooManyHypotheses { count: usize, cap: usize },
}

impl SolveError {
    /// Resource exhaustion as opposed to a problem with the input.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            SolveError::Engine(_) | SolveError::TooManyHypotheses { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle size cap exceeded: {what} is {size}, limit {limit}")]
    Cap {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Cost(#[from] CostError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TspError {
    #[error("line {line}: `{token}` is not an integer weight")]
    NotAnInteger { line: usize, token: String },
    #[error("weight matrix must be square with at least 2 cities, got {rows} rows and {cols} columns in row {row}")]
    Shape {
        rows: usize,
        cols: usize,
        row: usize,
    },
    #[error("expected {expected} cities, weight matrix has {found}")]
    CityCount { expected: usize, found: usize },
    #[error("arc ({from},{to}) has weight {weight}; penalties must be positive")]
    NonPositive { from: usize, to: usize, weight: i64 },
    #[error("city count {0} outside the supported range 2..=8")]
    OutOfRange(usize),
}
