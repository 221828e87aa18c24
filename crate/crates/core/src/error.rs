use thiserror::Error;

use crate::exact::ExtremalResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed equation: {0}")]
    MalformedEquation(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// The node or time cap was hit. `best` carries the best set found so far,
    /// with `optimal == false`.
    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded {
        nodes: u64,
        best: Option<Box<ExtremalResult>>,
    },

    #[error("instance with {vertices} vertices exceeds the solver limit of {limit}")]
    InstanceTooLarge { vertices: usize, limit: usize },

    #[error("q = {q} divides s = {s}")]
    QDividesS { q: u64, s: i64 },

    #[error("infeasible construction: {0}")]
    Infeasible(String),

    /// A constructed set failed the avoidance checker. This is a bug guard.
    #[error("constructed set does not avoid the equation: {0}")]
    AvoidanceCheckFailed(String),

    #[error("degenerate denominator for b = {b}, c = {c}")]
    DegenerateDenominator { b: u64, c: u64 },

    #[error("scan for s' found nothing in [1, {n}]")]
    ScanFailed { n: u64 },

    #[error("input set is empty")]
    EmptyInput,

    #[error("input set contains the solution {0}")]
    NotAvoiding(String),

    #[error("interval [{lo}, {hi}] is not inside [1, {n}]")]
    IntervalOutOfRange { lo: i64, hi: i64, n: u64 },

    #[error("no case rule matched {0}")]
    CaseRuleUnmatched(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedEquation(_) => "MalformedEquation",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::InstanceTooLarge { .. } => "InstanceTooLarge",
            Error::QDividesS { .. } => "QDividesS",
            Error::Infeasible(_) => "Infeasible",
            Error::AvoidanceCheckFailed(_) => "AvoidanceCheckFailed",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::ScanFailed { .. } => "ScanFailed",
            Error::EmptyInput => "EmptyInput",
            Error::NotAvoiding(_) => "NotAvoiding",
            Error::IntervalOutOfRange { .. } => "IntervalOutOfRange",
            Error::CaseRuleUnmatched(_) => "CaseRuleUnmatched",
        }
    }
}
