use thiserror::Error;

/// Errors raised by the geometry, ODE and certificate routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("t = {t} lies outside the interval [{lo}, {hi}]")]
    Domain { t: f64, lo: f64, hi: f64 },

    #[error("warp derivatives are unavailable (no analytic f', f'' and finite differences disabled)")]
    DerivativeUnavailable,

    #[error("warp function is not positive at t = {t} (f = {value})")]
    NonPositiveWarp { t: f64, value: f64 },

    #[error("invalid band: {0}")]
    InvalidBand(String),

    #[error("invalid dimension n = {n}: {reason}")]
    Dimension { n: usize, reason: &'static str },

    #[error("finite-difference step too large: h and h/2 estimates disagree by {disagreement:e} at t = {t}")]
    StepTooLarge { t: f64, disagreement: f64 },

    #[error("step {step} is too coarse for the range of length {range}")]
    Step { step: f64, range: f64 },

    #[error("solution blows up: |eta| exceeded the escape threshold at t = {t}")]
    BlowUp { t: f64 },

    #[error("eta is not strictly decreasing: {0}")]
    NotDecreasing(String),

    #[error("geometry precondition failed: {0}")]
    Geometry(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("mode error: {0}")]
    Mode(String),

    #[error("potential is not admissible: {0}")]
    Admissibility(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("converged eigenvector has a non-positive entry ({min:e})")]
    NegativeEigenvector { min: f64 },

    #[error("table error: {0}")]
    Table(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
