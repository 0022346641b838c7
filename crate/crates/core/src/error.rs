use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variance scale rho must be positive and finite, got {0}")]
    NonPositiveRho(f64),

    #[error("Laguerre parameter alpha must exceed -1, got {0}")]
    AlphaOutOfRange(f64),

    #[error("n + alpha = {0} exceeds the exact-arithmetic range of 64")]
    ExactRangeExceeded(u64),

    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },

    #[error("integer coefficient overflow while building J_{{{m},{n}}}")]
    CoefficientOverflow { m: u32, n: u32 },

    #[error("expected a sequence of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("quadrature with {nodes} nodes is exact to degree {exact}, integrand needs {required}")]
    QuadratureNotExact {
        nodes: usize,
        exact: usize,
        required: usize,
    },

    #[error("quadrature grid built for rho = {grid} but the model has rho = {model}")]
    GridMismatch { grid: f64, model: f64 },

    #[error("adaptive quadrature did not converge within depth {0}")]
    NonConvergence(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveRho(rho))
    }
}
