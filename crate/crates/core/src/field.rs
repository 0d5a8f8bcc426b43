use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Complex wavefunction sampled on a [`Grid1D`].
///
/// The density `|ψ|²` is never cached; use [`WaveField::density`].
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: Arc<Grid1D>,
    values: Vec<Complex64>,
}

impl WaveField {
    pub fn new(grid: Arc<Grid1D>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), actual: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<Grid1D>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.n()];
        Self { grid, values }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Arc<Grid1D>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Mutable access for steppers. Callers are responsible for keeping the
    /// samples finite.
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn same_grid(&self, other: &WaveField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn scaled(&self, factor: f64) -> WaveField {
        WaveField {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

/// Samples `b0 * exp(-a0 (x - center)² / 2)`.
pub fn gaussian_field(
    grid: Arc<Grid1D>,
    b0: Complex64,
    a0: Complex64,
    center: f64,
) -> Result<WaveField> {
    if !(a0.re > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Gaussian width needs Re(a0) > 0, got {a0}"
        )));
    }
    WaveField::from_fn(grid, |x| {
        let y = x - center;
        b0 * (-0.5 * a0 * y * y).exp()
    })
}
