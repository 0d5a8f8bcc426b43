//! Closed-form and ODE descriptions of Gaussian solutions. These serve as
//! the oracle for the grid solver.

mod centered;
mod gausson;
mod moving;
mod rk4;
mod scaling;

use std::f64::consts::PI;

pub use centered::{
    first_integral_residual, gaussian_rhs, gaussian_to_field, integrate_gaussian, width_bounds, GaussianState,
    GaussianTrajectory, WidthBounds, COLLAPSE_THRESHOLD,
};
pub use gausson::{elliptic_residual, gausson_profile, stationary_phase, Gausson};
pub use moving::{moving_center_integrate, MovingCenterInit, MovingState, MovingTrajectory};
pub use scaling::{tau_solve, ScalingSolution};

use crate::error::{Error, Result};

/// Large-time constants of a d = 1 Gaussian solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticConstants {
    /// `r → r_star = √(α0 / (−2λ))` and `|ψ| → C e^{λx²}` with
    /// `C = (−2λ/π)^{1/4} ‖ψ0‖₂`.
    Focusing { r_star: f64, profile_coeff: f64 },
    /// `r ~ r_coeff √t`, `ṙ ~ rdot_coeff / √t`, `‖ψ‖_∞ ~ linf_coeff t^{−1/4}`,
    /// `‖ψ_x‖₂ ~ grad_coeff / √t`.
    Defocusing { r_coeff: f64, rdot_coeff: f64, linf_coeff: f64, grad_coeff: f64 },
}

pub fn asymptotic_constants(alpha0: f64, b0_mod: f64, lambda: f64, mu: f64, d: u32) -> Result<AsymptoticConstants> {
    if d != 1 {
        return Err(Error::Dimension(format!("constants are provided for d = 1 only, got d = {d}")));
    }
    if !(alpha0 > 0.0 && b0_mod > 0.0) {
        return Err(Error::InvalidParameter("need alpha0 > 0 and |b0| > 0".into()));
    }
    if lambda < 0.0 {
        let l2 = b0_mod * (PI / alpha0).powf(0.25);
        return Ok(AsymptoticConstants::Focusing {
            r_star: (alpha0 / (-2.0 * lambda)).sqrt(),
            profile_coeff: (-2.0 * lambda / PI).powf(0.25) * l2,
        });
    }
    if !(lambda > 0.0 && mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "no asymptotic regime for lambda = {lambda}, mu = {mu}"
        )));
    }
    // ‖ψ_x‖² = (√π |b0|² / (2 α0^{3/2})) (α0² / r² + ṙ²) on the asymptotics.
    let grad_sq = PI.sqrt() / (2.0 * alpha0.sqrt()) * (mu / (4.0 * lambda) + lambda / mu);
    Ok(AsymptoticConstants::Defocusing {
        r_coeff: 2.0 * (lambda * alpha0 / mu).sqrt(),
        rdot_coeff: (lambda * alpha0 / mu).sqrt(),
        linf_coeff: b0_mod * (mu / (4.0 * lambda * alpha0)).powf(0.25),
        grad_coeff: b0_mod * grad_sq.sqrt(),
    })
}
