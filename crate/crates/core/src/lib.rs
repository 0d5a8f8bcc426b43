//! Pseudospectral solver and Gaussian oracle for the logarithmic
//! Schrödinger equation with friction,
//! `i ψ_t + ½ ψ_xx = λ ψ log(|ψ|² + ε) + (μ / 2i) ψ log(ψ / ψ*)`,
//! on a periodic 1-D grid.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod field;
pub mod gaussian;
pub mod grid;
pub mod params;
pub mod spectral;
pub mod splitting;

pub use diagnostics::{DiagnosticsRow, PowerLawFit, ProfileTarget};
pub use error::{Error, Result};
pub use field::{gaussian_field, WaveField};
pub use grid::Grid1D;
pub use params::PhysParams;
pub use spectral::SpectralPlan;
pub use splitting::{LieTrotter, PhaseBranch, SplittingConfig};
