use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point violates the hyperboloid constraint (defect {defect:.3e})")]
    InvalidPoint { defect: f64 },

    #[error("point lies outside the model domain (|x| = {norm})")]
    OutOfModel { norm: f64 },

    #[error("argument outside the domain of {what}: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("derivative order {order} exceeds the supported maximum {max}")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("Gamma function pole at {0}")]
    Pole(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("quadrature did not converge: {0}")]
    Convergence(String),

    #[error("accuracy target missed: {0}")]
    Accuracy(String),

    #[error("normalization calibration failed: ratio drifts by {drift:.3e} over the check grid")]
    Calibration { drift: f64 },

    #[error("transform diverges: {0}")]
    Divergence(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("initial profile is identically zero (trivial fixed point)")]
    TrivialFixedPoint,

    #[error("sampling failed: {0}")]
    Sampling(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
