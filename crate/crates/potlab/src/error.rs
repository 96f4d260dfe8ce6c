use thiserror::Error;

#[derive(Debug, Error)]
pub enum PotlabError {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numeric parameter violates a precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Evaluation point too close to the source; direct quadrature would be
    /// inaccurate. Use a closed form instead.
    #[error("near-singularity: {0}")]
    NearSingularity(String),

    /// Evaluation point inside the convergence region boundary of a series.
    #[error("outside convergence region: {0}")]
    ConvergenceRegion(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, PotlabError>;
