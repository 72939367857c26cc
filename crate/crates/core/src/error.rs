use thiserror::Error;

/// Errors produced anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("mesh invariant violated: {0}")]
    MeshInvariant(String),

    #[error("margin {margin} leaves no interior triangles; the largest feasible margin is {largest_feasible}")]
    InfeasibleMargin { margin: f64, largest_feasible: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("assembly integrity: {0}")]
    AssemblyIntegrity(String),

    #[error("eigensolver did not converge in {iterations} iterations; worst residual {worst:e}")]
    NoConvergence { iterations: usize, worst: f64, residuals: Vec<f64> },

    #[error("vector {index} is numerically dependent on the preceding vectors (relative pivot {pivot:e})")]
    Dependent { index: usize, pivot: f64 },

    #[error("all {count} computed eigenvalues are negative; the negative count is only a lower bound, request more eigenpairs")]
    CountTooSmall { count: usize },

    #[error("probe inside span: {0}")]
    InSpan(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code: 3 for numerical failures of the solver, 2 for
    /// everything caused by the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. }
            | Error::AssemblyIntegrity(_)
            | Error::Overflow(_)
            | Error::CountTooSmall { .. } => 3,
            _ => 2,
        }
    }
}
