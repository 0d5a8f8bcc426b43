use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite value at sample {index}")]
    NonFiniteSample { index: usize },

    /// A time step produced NaN or Inf. `time` is the last time at which the
    /// field was still finite.
    #[error("non-finite field after step {step} (last good time t = {time})")]
    NonFinite { step: u64, time: f64 },

    #[error("width parameter r = {r:e} collapsed at t = {time}")]
    Collapse { time: f64, r: f64 },

    #[error("power-law fit: {0}")]
    Fit(String),

    #[error("mass {mass} differs from reference {reference} beyond tolerance")]
    MassMismatch { mass: f64, reference: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}
