//! Observables of fields and densities. Quadratures use the rectangle rule;
//! derivatives are spectral.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::WaveField;
use crate::gaussian::{Gausson, ScalingSolution};
use crate::grid::Grid1D;
use crate::params::PhysParams;
use crate::spectral::SpectralPlan;
use crate::splitting::energy_reg_with;

/// Densities below this are treated as 0 in `ρ log ρ`.
pub const RHO_FLOOR: f64 = 1e-300;
/// Floor applied to `√ρ` before spectral differentiation.
pub const SQRT_RHO_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub mass: f64,
    pub e_reg: f64,
    /// `½ ∫ |ψ_x|²`.
    pub e_kin_total: f64,
    /// `λ ∫ ρ log ρ`.
    pub e_pot_log: f64,
    /// `∫ xρ / ∫ ρ`.
    pub mean_x: f64,
    /// `∫ x²ρ / ∫ ρ`.
    pub mean_x2: f64,
    pub linf: f64,
    pub l1_profile_dist: Option<f64>,
}

/// Reference profile for the `l1_profile_dist` column.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileTarget {
    /// A fixed density on the simulation grid.
    Fixed(Vec<f64>),
    /// Mass-matched Gausson centered at the measured mean position.
    Gausson { lambda: f64 },
    /// Distance between the rescaled, mass-normalized density and
    /// `Γ = e^{−y²}` on `y_grid`.
    Rescaled { scaling: ScalingSolution, y_grid: Arc<Grid1D> },
}

pub fn mass(field: &WaveField) -> f64 {
    field.grid().integrate(&field.density())
}

pub fn linf(field: &WaveField) -> f64 {
    field.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn rho_log_rho(rho: f64) -> f64 {
    if rho < RHO_FLOOR {
        0.0
    } else {
        rho * rho.ln()
    }
}

/// `∫ ρ log ρ` with `0 log 0 = 0`.
pub fn entropy(grid: &Grid1D, density: &[f64]) -> f64 {
    grid.integrate(&density.iter().map(|&r| rho_log_rho(r)).collect::<Vec<_>>())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energies {
    pub e_kin_total: f64,
    pub e_pot_log: f64,
    pub e_reg: f64,
}

pub fn energies(plan: &SpectralPlan, field: &WaveField, params: &PhysParams) -> Result<Energies> {
    let grad = plan.gradient_norm_sqr(field.values())?;
    let e_pot_log = if params.lambda == 0.0 { 0.0 } else { params.lambda * entropy(field.grid(), &field.density()) };
    Ok(Energies { e_kin_total: 0.5 * grad, e_pot_log, e_reg: energy_reg_with(plan, field, params)? })
}

/// `∫ |∂_x √ρ|²`, spectral gradient of `max(√ρ, 1e-14)`.
pub fn sqrt_density_gradient_sq(plan: &SpectralPlan, density: &[f64]) -> Result<f64> {
    let amp: Vec<f64> = density.iter().map(|&r| r.max(0.0).sqrt().max(SQRT_RHO_FLOOR)).collect();
    let d = plan.derivative_real(&amp)?;
    Ok(plan.grid().integrate(&d.iter().map(|v| v * v).collect::<Vec<_>>()))
}

/// `(E_c, E_q)` with `E_q = ½ ∫ |∂_x √ρ|²` and `E_c = ½ ∫ |ψ_x|² − E_q`,
/// avoiding any division by ρ.
pub fn kinetic_split(plan: &SpectralPlan, field: &WaveField) -> Result<(f64, f64)> {
    let total = 0.5 * plan.gradient_norm_sqr(field.values())?;
    let quantum = 0.5 * sqrt_density_gradient_sq(plan, &field.density())?;
    Ok((total - quantum, quantum))
}

/// Raw moments `(∫ xρ, ∫ x²ρ)`.
pub fn moments(field: &WaveField) -> (f64, f64) {
    let g = field.grid();
    let (mut m1, mut m2) = (0.0, 0.0);
    for (x, v) in g.points().iter().zip(field.values()) {
        let r = v.norm_sqr();
        m1 += x * r;
        m2 += x * x * r;
    }
    (m1 * g.dx(), m2 * g.dx())
}

/// `∫ ρu = ∫ Im(ψ* ψ_x)`.
pub fn momentum(plan: &SpectralPlan, field: &WaveField) -> Result<f64> {
    let grad = plan.gradient(field.values())?;
    let j: Vec<f64> = field.values().iter().zip(&grad).map(|(p, d)| (p.conj() * d).im).collect();
    Ok(field.grid().integrate(&j))
}

pub fn profile_l1_distance(grid: &Grid1D, a: &[f64], b: &[f64]) -> Result<f64> {
    for s in [a, b] {
        if s.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), actual: s.len() });
        }
    }
    Ok(grid.integrate(&a.iter().zip(b).map(|(u, v)| (u - v).abs()).collect::<Vec<_>>()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RescaledDensity {
    pub y_grid: Arc<Grid1D>,
    /// `τ ρ(τ y)` by linear interpolation; 0 where `τ y` leaves the grid.
    pub values: Vec<f64>,
    /// Smallest and largest `y` whose image `τ y` lies on the grid.
    pub covered: Option<(f64, f64)>,
}

/// Mass-preserving rescaling `ρ̃(y) = τ ρ(τ y)`.
pub fn rescaled_density(field: &WaveField, tau: f64, y_grid: Arc<Grid1D>) -> Result<RescaledDensity> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    let g = field.grid();
    let rho = field.density();
    let n = g.n();
    let mut covered: Option<(f64, f64)> = None;
    let values = y_grid
        .points()
        .iter()
        .map(|&y| {
            let x = tau * y;
            if x < g.a() || x >= g.b() {
                return 0.0;
            }
            covered = Some(match covered {
                None => (y, y),
                Some((lo, _)) => (lo, y),
            });
            let s = (x - g.a()) / g.dx();
            let k = (s.floor() as usize).min(n - 1);
            let w = s - k as f64;
            tau * ((1.0 - w) * rho[k] + w * rho[(k + 1) % n])
        })
        .collect();
    Ok(RescaledDensity { y_grid, values, covered })
}

/// `Γ(y) = e^{−y²}` sampled on `grid`.
pub fn standard_profile(grid: &Grid1D) -> Vec<f64> {
    grid.points().iter().map(|y| (-y * y).exp()).collect()
}

/// `(α²/π) ∫|∂_x √ρ|² + (log m − (1 + log α)) m − ∫ ρ log ρ` with `m = ∫ρ`.
pub fn log_sobolev_residual(plan: &SpectralPlan, density: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let g = plan.grid();
    let m = g.integrate(density);
    if !(m > 0.0) {
        return Err(Error::InvalidParameter("log-Sobolev residual needs positive mass".into()));
    }
    let rhs = alpha * alpha / PI * sqrt_density_gradient_sq(plan, density)? + (m.ln() - (1.0 + alpha.ln())) * m;
    Ok(rhs - entropy(g, density))
}

/// Relative mass mismatch tolerated by [`csiszar_kullback_residual`].
pub const CK_MASS_TOL: f64 = 1e-3;

/// `∫ ρ̃ log(ρ̃/Γ) − ‖ρ̃ − Γ‖₁² / (2 ‖Γ‖₁)` on the y-grid, after
/// normalizing `ρ̃` to the discrete mass of Γ.
pub fn csiszar_kullback_residual(y_grid: &Grid1D, density: &[f64]) -> Result<f64> {
    if density.len() != y_grid.n() {
        return Err(Error::LengthMismatch { expected: y_grid.n(), actual: density.len() });
    }
    let gamma = standard_profile(y_grid);
    let m_gamma = y_grid.integrate(&gamma);
    let m = y_grid.integrate(density);
    if !((m - m_gamma).abs() <= CK_MASS_TOL * m_gamma) {
        return Err(Error::MassMismatch { mass: m, reference: m_gamma });
    }
    let scale = m_gamma / m;
    let rho: Vec<f64> = density.iter().map(|r| r * scale).collect();
    let rel: Vec<f64> = rho
        .iter()
        .zip(y_grid.points())
        .map(|(&r, y)| rho_log_rho(r) + r * y * y)
        .collect();
    let e_ent = y_grid.integrate(&rel);
    let l1 = profile_l1_distance(y_grid, &rho, &gamma)?;
    Ok(e_ent - l1 * l1 / (2.0 * m_gamma))
}

/// L¹ distance between the rescaled density, normalized to the mass of Γ,
/// and Γ.
pub fn rescaled_profile_distance(field: &WaveField, tau: f64, y_grid: &Arc<Grid1D>) -> Result<f64> {
    let r = rescaled_density(field, tau, y_grid.clone())?;
    let gamma = standard_profile(y_grid);
    let m = y_grid.integrate(&r.values);
    if !(m > 0.0) {
        return Err(Error::InvalidParameter("rescaled density has no mass on the y-grid".into()));
    }
    let scale = y_grid.integrate(&gamma) / m;
    let rho: Vec<f64> = r.values.iter().map(|v| v * scale).collect();
    profile_l1_distance(y_grid, &rho, &gamma)
}

/// Density of the mass-matched Gausson centered at `center`.
pub fn gausson_density(grid: &Grid1D, mass: f64, lambda: f64, center: f64) -> Result<Vec<f64>> {
    let g = Gausson::mass_matched(mass, lambda, 1)?;
    Ok(grid.points().iter().map(|x| g.density((x - center) * (x - center))).collect())
}

fn target_distance(field: &WaveField, m: f64, mean_x: f64, t: f64, target: &ProfileTarget) -> Result<Option<f64>> {
    let g = field.grid();
    match target {
        ProfileTarget::Fixed(rho) => profile_l1_distance(g, &field.density(), rho).map(Some),
        ProfileTarget::Gausson { lambda } => {
            let rho = gausson_density(g, m, *lambda, mean_x)?;
            profile_l1_distance(g, &field.density(), &rho).map(Some)
        }
        ProfileTarget::Rescaled { scaling, y_grid } => match scaling.tau_at(t) {
            Some(tau) => rescaled_profile_distance(field, tau, y_grid).map(Some),
            None => Ok(None),
        },
    }
}

pub fn diagnostics_row(
    plan: &SpectralPlan,
    field: &WaveField,
    params: &PhysParams,
    t: f64,
    target: Option<&ProfileTarget>,
) -> Result<DiagnosticsRow> {
    let m = mass(field);
    let e = energies(plan, field, params)?;
    let (m1, m2) = moments(field);
    let (mean_x, mean_x2) = if m > 0.0 { (m1 / m, m2 / m) } else { (0.0, 0.0) };
    let l1_profile_dist = match target {
        Some(tg) if m > 0.0 => target_distance(field, m, mean_x, t, tg)?,
        _ => None,
    };
    Ok(DiagnosticsRow {
        t,
        mass: m,
        e_reg: e.e_reg,
        e_kin_total: e.e_kin_total,
        e_pot_log: e.e_pot_log,
        mean_x,
        mean_x2,
        linf: linf(field),
        l1_profile_dist,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub coeff: f64,
    pub exponent: f64,
    pub rms_log_residual: f64,
}

/// Minimum number of samples inside the fitting window.
pub const MIN_FIT_SAMPLES: usize = 10;

/// Least squares for `log v = log C + p log t` over samples with `t` in
/// `[t_lo, t_hi]`.
pub fn fit_power_law(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<PowerLawFit> {
    if times.len() != values.len() {
        return Err(Error::LengthMismatch { expected: times.len(), actual: values.len() });
    }
    let (lo, hi) = window;
    let mut pts = Vec::new();
    for (&t, &v) in times.iter().zip(values) {
        if t < lo || t > hi {
            continue;
        }
        if !(t > 0.0 && v > 0.0) {
            return Err(Error::Fit(format!("nonpositive sample (t = {t}, v = {v}) in window")));
        }
        pts.push((t.ln(), v.ln()));
    }
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "{} samples in [{lo}, {hi}], need at least {MIN_FIT_SAMPLES}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("window has no spread in t".into()));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss: f64 = pts.iter().map(|p| (p.1 - intercept - exponent * p.0).powi(2)).sum();
    Ok(PowerLawFit { coeff: intercept.exp(), exponent, rms_log_residual: (ss / n).sqrt() })
}
