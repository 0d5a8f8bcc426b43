//! Discrete Fourier machinery on a periodic [`Grid1D`].
//!
//! Normalization: the forward transform is unnormalized, the inverse carries
//! `1/n`. With this convention the discrete Parseval identity reads
//! `sum |v_k|² dx = (dx / n) sum |v̂_m|²`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::WaveField;
use crate::grid::Grid1D;

/// Wavenumbers in FFT order: `(2π / (b - a)) [0, 1, …, n/2 - 1, -n/2, …, -1]`.
pub fn wavenumbers(grid: &Grid1D) -> Vec<f64> {
    let n = grid.n();
    let scale = 2.0 * PI / grid.len();
    (0..n)
        .map(|m| {
            let signed = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
            scale * signed
        })
        .collect()
}

/// FFT plans and wavenumbers for one grid. Immutable and shareable; scratch
/// space is allocated per call unless the caller supplies its own.
#[derive(Clone)]
pub struct SpectralPlan {
    grid: Arc<Grid1D>,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralPlan").field("n", &self.grid.n()).finish_non_exhaustive()
    }
}

impl SpectralPlan {
    pub fn new(grid: Arc<Grid1D>) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.n());
        let inverse = planner.plan_fft_inverse(grid.n());
        let wavenumbers = wavenumbers(&grid);
        Self { grid, wavenumbers, forward, inverse }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.grid.n() {
            return Err(Error::LengthMismatch { expected: self.grid.n(), actual: len });
        }
        Ok(())
    }

    /// Unnormalized forward transform.
    pub fn forward(&self, values: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(values.len())?;
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        Ok(buf)
    }

    /// Inverse transform including the `1/n` factor.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(spectrum.len())?;
        let mut buf = spectrum.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.grid.n() as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
        Ok(buf)
    }

    pub(crate) fn forward_with_scratch(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, scratch);
    }

    /// Inverse without the `1/n` factor; callers fold it into their multiplier.
    pub(crate) fn inverse_unnormalized_with_scratch(
        &self,
        buf: &mut [Complex64],
        scratch: &mut [Complex64],
    ) {
        self.inverse.process_with_scratch(buf, scratch);
    }

    /// Spectral side of the Parseval identity, `(dx / n) sum |v̂|²`.
    pub fn spectral_norm_sqr(&self, spectrum: &[Complex64]) -> f64 {
        let n = self.grid.n() as f64;
        spectrum.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx() / n
    }

    /// Exact flow of `i u_t = -½ u_xx` over `dt`: every Fourier mode is
    /// multiplied by `exp(-i dt k² / 2)`.
    pub fn kinetic_flow(&self, field: &mut WaveField, dt: f64) -> Result<()> {
        self.check_len(field.values().len())?;
        let scale = 1.0 / self.grid.n() as f64;
        let buf = field.values_mut();
        self.forward.process(buf);
        for (v, &k) in buf.iter_mut().zip(&self.wavenumbers) {
            *v *= Complex64::from_polar(scale, -0.5 * dt * k * k);
        }
        self.inverse.process(buf);
        Ok(())
    }

    /// `∂_x ψ` by multiplication with `i k` in Fourier space.
    pub fn gradient(&self, values: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut spec = self.forward(values)?;
        let scale = 1.0 / self.grid.n() as f64;
        for (v, &k) in spec.iter_mut().zip(&self.wavenumbers) {
            *v *= Complex64::new(0.0, k * scale);
        }
        self.inverse.process(&mut spec);
        Ok(spec)
    }

    /// Derivative of a real sampled function. The Nyquist mode drops out when
    /// taking the real part.
    pub fn derivative_real(&self, f: &[f64]) -> Result<Vec<f64>> {
        let values: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Ok(self.gradient(&values)?.into_iter().map(|v| v.re).collect())
    }

    /// Second derivative of a real sampled function (multiplication by `-k²`).
    pub fn laplacian_real(&self, f: &[f64]) -> Result<Vec<f64>> {
        let values: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut spec = self.forward(&values)?;
        let scale = 1.0 / self.grid.n() as f64;
        for (v, &k) in spec.iter_mut().zip(&self.wavenumbers) {
            *v *= -k * k * scale;
        }
        self.inverse.process(&mut spec);
        Ok(spec.into_iter().map(|v| v.re).collect())
    }

    /// `∫ |∂_x ψ|²` evaluated in Fourier space, `(dx / n) sum k² |ψ̂|²`.
    pub fn gradient_norm_sqr(&self, values: &[Complex64]) -> Result<f64> {
        let spec = self.forward(values)?;
        let n = self.grid.n() as f64;
        let sum: f64 = spec
            .iter()
            .zip(&self.wavenumbers)
            .map(|(v, &k)| k * k * v.norm_sqr())
            .sum();
        Ok(sum * self.grid.dx() / n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gaussian_field;
    use approx::assert_abs_diff_eq;

    fn plan(a: f64, b: f64, n: usize) -> SpectralPlan {
        SpectralPlan::new(Arc::new(Grid1D::new(a, b, n).unwrap()))
    }

    fn lcg_field(grid: Arc<Grid1D>, mut seed: u64) -> WaveField {
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let values = (0..grid.n()).map(|_| Complex64::new(next(), next())).collect();
        WaveField::new(grid, values).unwrap()
    }

    #[test]
    fn wavenumbers_on_two_pi_torus() {
        let g = Grid1D::new(0.0, 2.0 * PI, 4).unwrap();
        let k = wavenumbers(&g);
        let expected = [0.0, 1.0, -2.0, -1.0];
        for (a, b) in k.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn wavenumbers_on_figure_domain() {
        let g = Grid1D::new(-100.0, 100.0, 1000).unwrap();
        let k = wavenumbers(&g);
        assert_abs_diff_eq!(k[1], 2.0 * PI / 200.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k[500], -(2.0 * PI / 200.0) * 500.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_field_is_pure_mode_zero() {
        let p = plan(0.0, 1.0, 16);
        let spec = p.forward(&vec![Complex64::new(2.0, -1.0); 16]).unwrap();
        assert_abs_diff_eq!(spec[0].re, 32.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec[0].im, -16.0, epsilon = 1e-12);
        for v in &spec[1..] {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn single_mode_lands_in_its_bin() {
        let p = plan(-3.0, 5.0, 32);
        let k3 = p.wavenumbers()[3];
        let values: Vec<_> = p.grid().points().iter().map(|&x| Complex64::from_polar(1.0, k3 * x)).collect();
        let spec = p.forward(&values).unwrap();
        for (m, v) in spec.iter().enumerate() {
            if m == 3 {
                assert_abs_diff_eq!(v.norm(), 32.0, epsilon = 1e-10);
            } else {
                assert!(v.norm() < 1e-10, "bin {m} = {v}");
            }
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        let p = plan(-10.0, 10.0, 250);
        let f = lcg_field(Arc::new(p.grid().clone()), 7);
        let spec = p.forward(f.values()).unwrap();
        let back = p.inverse(&spec).unwrap();
        let vmax = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in f.values().iter().zip(&back) {
            assert!((a - b).norm() <= 1e-12 * vmax);
        }
        let physical = p.grid().integrate(&f.density());
        let spectral = p.spectral_norm_sqr(&spec);
        assert!((physical - spectral).abs() <= 1e-12 * physical);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let p = plan(0.0, 1.0, 8);
        assert!(matches!(
            p.forward(&[Complex64::new(0.0, 0.0); 6]),
            Err(Error::LengthMismatch { expected: 8, actual: 6 })
        ));
    }

    #[test]
    fn kinetic_flow_fixes_constants_and_preserves_norm() {
        let p = plan(0.0, 10.0, 64);
        let g = Arc::new(p.grid().clone());
        let mut c = WaveField::new(g.clone(), vec![Complex64::new(0.3, 0.4); 64]).unwrap();
        p.kinetic_flow(&mut c, 0.7).unwrap();
        for v in c.values() {
            assert!((v - Complex64::new(0.3, 0.4)).norm() < 1e-14);
        }

        let mut f = lcg_field(g, 11);
        let before = f.grid().integrate(&f.density());
        p.kinetic_flow(&mut f, 0.37).unwrap();
        let after = f.grid().integrate(&f.density());
        assert!((before - after).abs() <= 1e-12 * before);
    }

    #[test]
    fn kinetic_flow_group_property() {
        let p = plan(-20.0, 20.0, 128);
        let g = Arc::new(p.grid().clone());
        let f0 = lcg_field(g, 3);
        let mut split = f0.clone();
        p.kinetic_flow(&mut split, 0.013).unwrap();
        p.kinetic_flow(&mut split, 0.021).unwrap();
        let mut joint = f0.clone();
        p.kinetic_flow(&mut joint, 0.034).unwrap();
        for (a, b) in split.values().iter().zip(joint.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        let mut back = f0.clone();
        p.kinetic_flow(&mut back, 0.05).unwrap();
        p.kinetic_flow(&mut back, -0.05).unwrap();
        for (a, b) in back.values().iter().zip(f0.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    // Free Schrödinger evolution of e^{-x²/2}: |ψ(t,x)|² = exp(-x²/(1+t²)) / sqrt(1+t²).
    #[test]
    fn free_gaussian_matches_closed_form() {
        let p = plan(-40.0, 40.0, 1024);
        let g = Arc::new(p.grid().clone());
        let one = Complex64::new(1.0, 0.0);
        let mut f = gaussian_field(g.clone(), one, one, 0.0).unwrap();
        for _ in 0..100 {
            p.kinetic_flow(&mut f, 0.01).unwrap();
        }
        let t: f64 = 1.0;
        let s = 1.0 + t * t;
        let exact: Vec<f64> = g.points().iter().map(|x| (-x * x / s).exp() / s.sqrt()).collect();
        let rho = f.density();
        let num: f64 = rho.iter().zip(&exact).map(|(a, b)| (a - b).powi(2)).sum();
        let den: f64 = exact.iter().map(|b| b * b).sum();
        assert!((num / den).sqrt() <= 1e-6);
    }

    #[test]
    fn gradients() {
        let p = plan(-100.0, 100.0, 1000);
        let zero = p.gradient(&vec![Complex64::new(1.5, -2.0); 1000]).unwrap();
        assert!(zero.iter().all(|v| v.norm() < 1e-12));

        let k2 = p.wavenumbers()[2];
        let mode: Vec<_> = p.grid().points().iter().map(|&x| Complex64::from_polar(1.0, k2 * x)).collect();
        let d = p.gradient(&mode).unwrap();
        for (dv, v) in d.iter().zip(&mode) {
            assert!((dv - Complex64::new(0.0, k2) * v).norm() < 1e-10);
        }

        let gauss: Vec<f64> = p.grid().points().iter().map(|x| (-x * x / 2.0).exp()).collect();
        let dg = p.derivative_real(&gauss).unwrap();
        for ((x, g), d) in p.grid().points().iter().zip(&gauss).zip(&dg) {
            assert!((d + x * g).abs() < 1e-8);
        }
    }

    #[test]
    fn laplacian_of_gaussian() {
        let p = plan(-30.0, 30.0, 512);
        let f: Vec<f64> = p.grid().points().iter().map(|x| (-x * x / 2.0).exp()).collect();
        let lap = p.laplacian_real(&f).unwrap();
        for ((x, g), l) in p.grid().points().iter().zip(&f).zip(&lap) {
            assert!((l - (x * x - 1.0) * g).abs() < 1e-10);
        }
    }

    #[test]
    fn gradient_norm_in_fourier_space_matches_physical() {
        let p = plan(-30.0, 30.0, 512);
        let one = Complex64::new(1.0, 0.0);
        let f = gaussian_field(Arc::new(p.grid().clone()), one, Complex64::new(1.0, 0.5), 0.0).unwrap();
        let grad = p.gradient(f.values()).unwrap();
        let physical = p.grid().integrate(&grad.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>());
        let spectral = p.gradient_norm_sqr(f.values()).unwrap();
        assert!((physical - spectral).abs() < 1e-12 * physical);
    }
}
