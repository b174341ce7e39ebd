use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite {0}")]
    NonFinite(&'static str),

    #[error("degenerate lowest eigenvalue: gap {gap:e} below threshold {threshold:e}")]
    Degenerate { gap: f64, threshold: f64 },

    #[error("spectral window selected {found} eigenvalues, expected {expected}")]
    RankMismatch { expected: usize, found: usize },

    #[error("eigenvalue {value} lies within {tol:e} of the spectral window boundary")]
    AmbiguousWindow { value: f64, tol: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular Newton Jacobian (|det| = {det:e})")]
    DegenerateJacobian { det: f64 },

    #[error("not an index-1 saddle: {0}")]
    NotASaddle(String),

    #[error("step size underflow at t = {t}: dt = {dt:e}")]
    StepSizeUnderflow { t: f64, dt: f64 },

    #[error("non-finite state at t = {t} after {steps} accepted steps")]
    NonFiniteState {
        t: f64,
        steps: usize,
        trail: Vec<crate::flows::Sample>,
    },

    #[error("seed point is outside the sublevel set (|grad E| = {grad_norm} > L = {level})")]
    SeedOutsideSublevel { grad_norm: f64, level: f64 },

    #[error("no cycle: orbit left the annulus (distance {distance:e} > limit {limit:e})")]
    NoCycle { distance: f64, limit: f64 },

    #[error("hypothesis check failed: {0}")]
    HypothesisViolated(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Degenerate { .. }
                | Error::RankMismatch { .. }
                | Error::AmbiguousWindow { .. }
                | Error::NoConvergence { .. }
                | Error::DegenerateJacobian { .. }
                | Error::StepSizeUnderflow { .. }
                | Error::NonFiniteState { .. }
                | Error::NoCycle { .. }
        )
    }
}
