use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("floating-point overflow while {0}")]
    Overflow(String),

    #[error("matrix is not upper Hessenberg: nonzero entry at ({row}, {col})")]
    NotHessenberg { row: usize, col: usize },

    #[error("characteristic polynomial mismatch at x = {point}: det = {det}, polynomial = {poly}")]
    CharpolyMismatch {
        point: String,
        det: String,
        poly: String,
    },

    #[error("QR iteration did not converge after {iterations} iterations; {deflated} of {n} eigenvalues deflated")]
    NoConvergence {
        iterations: usize,
        deflated: usize,
        n: usize,
    },

    #[error("inverse iteration broke down at shift {0}")]
    InverseIteration(String),

    #[error("Newton iteration diverged from {0}")]
    NewtonDivergence(String),

    #[error("grid of {nodes} nodes exceeds the budget of {budget}")]
    GridBudget { nodes: usize, budget: usize },

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
