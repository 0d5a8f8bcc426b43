//! Standing profiles of the focusing equation.
//!
//! Substituting `f = K e^{λ|x|²}` into `−½Δf + ωf + λ f log f² = 0` cancels
//! the `|x|²` terms identically and leaves `ω = λ (d − 2 log K)`, i.e.
//! `K = exp(d/2 − ω/(2λ))`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::SpectralPlan;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gausson {
    pub lambda: f64,
    pub omega: f64,
    /// Peak modulus `K`.
    pub k: f64,
    pub d: u32,
}

fn check_focusing(lambda: f64) -> Result<()> {
    if !(lambda < 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("Gausson needs lambda < 0, got {lambda}")));
    }
    Ok(())
}

impl Gausson {
    pub fn from_omega(omega: f64, lambda: f64, d: u32) -> Result<Self> {
        check_focusing(lambda)?;
        let k = (0.5 * d as f64 - omega / (2.0 * lambda)).exp();
        Ok(Self { lambda, omega, k, d })
    }

    /// Profile with `∫ |f|² = mass`, i.e. `K² = mass (−2λ/π)^{d/2}`.
    pub fn mass_matched(mass: f64, lambda: f64, d: u32) -> Result<Self> {
        check_focusing(lambda)?;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        let k = (mass * (-2.0 * lambda / PI).powf(0.5 * d as f64)).sqrt();
        let omega = lambda * (d as f64 - 2.0 * k.ln());
        Ok(Self { lambda, omega, k, d })
    }

    /// `K e^{λ r²}` at squared radius `r2`.
    pub fn modulus(&self, r2: f64) -> f64 {
        self.k * (self.lambda * r2).exp()
    }

    pub fn density(&self, r2: f64) -> f64 {
        self.k * self.k * (2.0 * self.lambda * r2).exp()
    }

    pub fn mass(&self) -> f64 {
        self.k * self.k * (PI / (-2.0 * self.lambda)).powf(0.5 * self.d as f64)
    }
}

/// Gausson from `ω`, or the mass-matched one when `norm_mass` is given.
pub fn gausson_profile(omega: f64, lambda: f64, d: u32, norm_mass: Option<f64>) -> Result<Gausson> {
    match norm_mass {
        Some(m) => Gausson::mass_matched(m, lambda, d),
        None => Gausson::from_omega(omega, lambda, d),
    }
}

/// `max |−½ f'' + ω f + λ f log f²|` over samples with `f > 1e-10`.
pub fn elliptic_residual(plan: &SpectralPlan, f: &[f64], omega: f64, lambda: f64) -> Result<f64> {
    let lap = plan.laplacian_real(f)?;
    Ok(f.iter()
        .zip(&lap)
        .filter(|(v, _)| **v > 1e-10)
        .map(|(&v, &l)| (-0.5 * l + omega * v + lambda * v * (v * v).ln()).abs())
        .fold(0.0, f64::max))
}

/// `S(t) = ω/μ + e^{−μt}`.
pub fn stationary_phase(omega: f64, mu: f64, t: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("stationary phase needs mu > 0, got {mu}")));
    }
    Ok(omega / mu + (-mu * t).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn plan() -> SpectralPlan {
        SpectralPlan::new(Arc::new(Grid1D::new(-12.0, 12.0, 512).unwrap()))
    }

    fn sample(plan: &SpectralPlan, f: impl Fn(f64) -> f64) -> Vec<f64> {
        plan.grid().points().iter().map(|&x| f(x)).collect()
    }

    #[test]
    fn derived_constant_solves_elliptic_equation() {
        let p = plan();
        let g = Gausson::from_omega(0.0, -1.0, 1).unwrap();
        assert_abs_diff_eq!(g.k, 0.5f64.exp(), epsilon = 1e-15);
        let f = sample(&p, |x| g.modulus(x * x));
        assert!(elliptic_residual(&p, &f, 0.0, -1.0).unwrap() <= 1e-8);

        let g = Gausson::from_omega(0.7, -0.5, 1).unwrap();
        let f = sample(&p, |x| g.modulus(x * x));
        assert!(elliptic_residual(&p, &f, 0.7, -0.5).unwrap() <= 1e-8);
    }

    #[test]
    fn wrong_width_is_not_a_solution() {
        let p = plan();
        let f = sample(&p, |x| (-2.0 * x * x).exp());
        assert!(elliptic_residual(&p, &f, 0.0, -1.0).unwrap() > 0.1);
    }

    #[test]
    fn residual_scaling_identity() {
        let p = plan();
        let g = Gausson::from_omega(0.0, -1.0, 1).unwrap();
        let f = sample(&p, |x| 1.3 * g.modulus(x * x));
        let lap = p.laplacian_real(&f).unwrap();
        let (k, c, lambda) = (p.grid().n() / 2 + 7, 0.4, -1.0);
        let res = |v: f64, l: f64| -0.5 * l + lambda * v * (v * v).ln();
        let scaled = res(c * f[k], c * lap[k]);
        assert_abs_diff_eq!(scaled, c * res(f[k], lap[k]) + lambda * c * f[k] * (c * c).ln(), epsilon = 1e-13);
    }

    #[test]
    fn mass_matched_profile() {
        let g = gausson_profile(123.0, -1.0, 1, Some(1.0)).unwrap();
        assert_abs_diff_eq!(g.density(0.0), (2.0 / PI).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(g.mass(), 1.0, epsilon = 1e-14);
        let p = plan();
        let rho = sample(&p, |x| g.density(x * x));
        assert_abs_diff_eq!(p.grid().integrate(&rho), 1.0, epsilon = 1e-10);
        let f = sample(&p, |x| g.modulus(x * x));
        assert!(elliptic_residual(&p, &f, g.omega, g.lambda).unwrap() <= 1e-8);
        assert!(gausson_profile(0.0, 0.1, 1, None).is_err());
        assert!(gausson_profile(0.0, -0.1, 1, Some(-1.0)).is_err());
    }

    #[test]
    fn stationary_phase_examples() {
        assert_abs_diff_eq!(stationary_phase(0.3, 2.0, 0.0).unwrap(), 1.15, epsilon = 1e-15);
        assert_abs_diff_eq!(stationary_phase(0.0, 1.0, 2f64.ln()).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(stationary_phase(0.5, 2.0, 50.0).unwrap(), 0.25, epsilon = 1e-40);
        assert!(stationary_phase(1.0, 0.0, 1.0).is_err());
    }
}
