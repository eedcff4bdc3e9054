use thiserror::Error;

use crate::metric::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid metric: {}", format_violations(.0))]
    InvalidMetric(Vec<Violation>),
    #[error("function has {found} values but the space has {expected} points")]
    LengthMismatch { expected: usize, found: usize },
    #[error("point {0} is out of range")]
    PointOutOfRange(usize),
    #[error("function is not in Δ(X): f({x}) + f({y}) < d({x},{y})")]
    NotInDelta { x: usize, y: usize },
    #[error("function is not extremal: value at {x} exceeds max_y d({x},y) - f(y)")]
    NotExtremal { x: usize },
    #[error("function is not 1-Lipschitz: |f({x}) - f({y})| > d({x},{y})")]
    NotLipschitz { x: usize, y: usize },
    #[error("metric is not integer-valued")]
    NotIntegerMetric,
    #[error("search budget exceeded: {required} candidates needed, cap is {cap}")]
    BudgetExceeded { required: u128, cap: u128 },
    #[error("extension domain is empty")]
    EmptyDomain,
    #[error("point subset is empty")]
    EmptySubset,
    #[error("not an isometric subspace: {0}")]
    NotSubspace(String),
    #[error("equality graph does not cover point {0}")]
    NotAdmissible(usize),
    #[error("cell is zero-dimensional")]
    ZeroDimensional,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("interval stability with beta={beta} fails at ({x}, {y}, {y2})")]
    StabilityHypothesisFails { beta: u64, x: usize, y: usize, y2: usize },
    #[error("permutation set is not a group: {0}")]
    NotAGroup(String),
    #[error("map is not an isometry: {0}")]
    NotAnIsometry(String),
    #[error("action is not cellular: {0}")]
    NotCellular(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Parse(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
