//! Gaussian densities with a moving center,
//! `ρ = b exp(−α (x − x̄)²)`, `u = βx + c`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::rk4::{step_count, Rk4};
use crate::error::{Error, Result};
use crate::field::WaveField;
use crate::grid::Grid1D;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingCenterInit {
    /// Peak density `b(0)`.
    pub b0: f64,
    pub alpha0: f64,
    pub beta0: f64,
    pub c0: f64,
    pub xbar0: f64,
}

impl MovingCenterInit {
    pub fn validate(&self) -> Result<()> {
        let all = [self.b0, self.alpha0, self.beta0, self.c0, self.xbar0];
        if all.iter().any(|v| !v.is_finite()) || !(self.b0 > 0.0) || !(self.alpha0 > 0.0) {
            return Err(Error::InvalidParameter(format!("need finite data with b0, alpha0 > 0: {self:?}")));
        }
        Ok(())
    }

    /// `‖ρ0‖₁ = b0 √(π / α0)`, conserved along the flow.
    pub fn mass(&self) -> f64 {
        self.b0 * (PI / self.alpha0).sqrt()
    }

    /// `∫ ρ0 u0 = ‖ρ0‖₁ (β0 x̄0 + c0)`.
    pub fn momentum(&self) -> f64 {
        self.mass() * (self.beta0 * self.xbar0 + self.c0)
    }

    /// Limit of the center, `x̄0 + (β0 x̄0 + c0) / μ`.
    pub fn limit_center(&self, mu: f64) -> f64 {
        self.xbar0 + (self.beta0 * self.xbar0 + self.c0) / mu
    }

    /// Wavefunction `√b0 exp(−α0 (x − x̄0)² / 2) exp(i (β0 x² / 2 + c0 x))`
    /// with this density and velocity.
    pub fn to_field(&self, grid: Arc<Grid1D>) -> Result<WaveField> {
        self.validate()?;
        let amp = self.b0.sqrt();
        WaveField::from_fn(grid, |x| {
            let y = x - self.xbar0;
            Complex64::from_polar(amp * (-0.5 * self.alpha0 * y * y).exp(), 0.5 * self.beta0 * x * x + self.c0 * x)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingState {
    pub alpha: f64,
    pub beta: f64,
    pub xbar: f64,
    pub c: f64,
    pub b: f64,
}

impl MovingState {
    pub fn mass(&self) -> f64 {
        self.b * (PI / self.alpha).sqrt()
    }

    /// `∫ x² ρ = ‖ρ‖₁ (1 / (2α) + x̄²)`.
    pub fn second_moment(&self) -> f64 {
        self.mass() * (0.5 / self.alpha + self.xbar * self.xbar)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MovingTrajectory {
    pub init: MovingCenterInit,
    pub times: Vec<f64>,
    pub states: Vec<MovingState>,
}

/// RK4 for
/// `α̇ = −2αβ`, `β̇ = −β² − μβ + 2λα + α²`, `x̄̇ = βx̄ + c`,
/// `ċ = −βc − μc − 2λαx̄ − α²x̄`, `ḃ = b (α̇ x̄² + 2αx̄ (x̄̇ − c) − β)`.
pub fn moving_center_integrate(
    init: MovingCenterInit,
    lambda: f64,
    mu: f64,
    t_end: f64,
    dt: f64,
    record_every: u64,
) -> Result<MovingTrajectory> {
    init.validate()?;
    let n = step_count(t_end, dt)?;
    let record_every = record_every.max(1);
    let rhs = |y: &[f64], dy: &mut [f64]| {
        let (alpha, beta, xbar, c, b) = (y[0], y[1], y[2], y[3], y[4]);
        let alpha_dot = -2.0 * alpha * beta;
        let xbar_dot = beta * xbar + c;
        dy[0] = alpha_dot;
        dy[1] = -beta * beta - mu * beta + 2.0 * lambda * alpha + alpha * alpha;
        dy[2] = xbar_dot;
        dy[3] = -beta * c - mu * c - 2.0 * lambda * alpha * xbar - alpha * alpha * xbar;
        dy[4] = b * (alpha_dot * xbar * xbar + 2.0 * alpha * xbar * (xbar_dot - c) - beta);
    };
    let as_state = |y: &[f64]| MovingState { alpha: y[0], beta: y[1], xbar: y[2], c: y[3], b: y[4] };

    let mut y = [init.alpha0, init.beta0, init.xbar0, init.c0, init.b0];
    let mut traj = MovingTrajectory { init, times: vec![0.0], states: vec![as_state(&y)] };
    let mut rk = Rk4::new(5);
    for step in 1..=n {
        rk.step(&mut y, dt, rhs);
        let t = step as f64 * dt;
        if !(y[0] > 0.0) {
            return Err(Error::Collapse { time: t, r: y[0] });
        }
        if step % record_every == 0 || step == n {
            traj.times.push(t);
            traj.states.push(as_state(&y));
        }
    }
    Ok(traj)
}
