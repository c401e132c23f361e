use thiserror::Error;

/// Errors raised by the model, its quadrature, minimizer and ODE solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("kernel is singular at r = 0 for a point particle")]
    Singularity,
    #[error("operation requires a {expected} body")]
    Kind { expected: &'static str },
    #[error("quadrature did not converge: value {value:e}, error estimate {estimate:e}")]
    Accuracy { value: f64, estimate: f64 },
    #[error("bracket [{lo:e}, {hi:e}] does not enclose a stationary point")]
    Bracketing { lo: f64, hi: f64 },
    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    Stiffness { t: f64, h: f64 },
    #[error("non-finite value in integration at t = {t:e}")]
    Numeric { t: f64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
