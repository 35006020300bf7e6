use thiserror::Error;

use crate::instance::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    Invalid(ValidationReport),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("formula has no clauses")]
    EmptyFormula,

    #[error("enumeration budget exceeded: {states} states > {budget}")]
    BudgetExceeded { states: u128, budget: u64 },

    #[error("type {0} has an all-infinite cost row")]
    AllInfiniteRow(usize),

    #[error("cost row of type {0} is not convex")]
    NonConvex(usize),

    #[error("row {0} is not supported on two consecutive outcomes")]
    NotConsecutive(usize),

    #[error("no finite-cost truthful mechanism exists")]
    InfiniteOptimum,

    #[error("mechanism is not truthful: pair ({0}, {1}) violated")]
    NotTruthful(usize, usize),

    #[error("no convergence after {iterations} iterations (best {best}, gap {gap:?})")]
    NonConvergence {
        iterations: usize,
        best: f64,
        gap: Option<f64>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
