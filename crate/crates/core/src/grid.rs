use crate::error::{Error, Result};

/// Uniform periodic grid on `[a, b)` with `n` points.
///
/// The right endpoint is excluded: `points[k] = a + k * dx` for `0 <= k < n`
/// with `dx = (b - a) / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    n: usize,
    dx: f64,
    points: Vec<f64>,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite endpoints [{a}, {b}]")));
        }
        if b <= a {
            return Err(Error::InvalidGrid(format!("need b > a, got [{a}, {b}]")));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "point count must be even and at least 4, got {n}"
            )));
        }
        let dx = (b - a) / n as f64;
        let points = (0..n).map(|k| a + k as f64 * dx).collect();
        Ok(Self { a, b, n, dx, points })
    }

    /// Grid with spacing `dx` on `[a, b)`; `(b - a) / dx` must round to an
    /// even integer.
    pub fn with_spacing(a: f64, b: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {dx}")));
        }
        let n = ((b - a) / dx).round() as usize;
        Self::new(a, b, n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Rectangle-rule quadrature `sum f(x_k) dx`.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.n);
        samples.iter().sum::<f64>() * self.dx
    }

    /// Index of the grid point closest to `x`, if `x` lies in `[a, b)`.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        if x < self.a || x >= self.b {
            return None;
        }
        let k = ((x - self.a) / self.dx).round() as usize;
        Some(k.min(self.n - 1))
    }
}
