use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("infeasible tolerance: {0}")]
    InfeasibleTolerance(String),
    #[error("matrix is singular to working precision near k = {re} + {im}i")]
    NearResonance { re: f64, im: f64 },
    #[error("target {index} at ({x}, {y}) is too close to the boundary")]
    NearBoundary { index: usize, x: f64, y: f64 },
    #[error("node budget exceeded: {n} nodes > {budget}")]
    Budget { n: usize, budget: usize },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
