//! Centered Gaussian solutions
//! `ψ = b0 ∏_j r_j^{-1/2} exp(iφ − α0_j x_j² / (2 r_j²) + i (ṙ_j / r_j) x_j² / 2)`.
//!
//! Each width obeys `r̈ = α0² / r³ + 2λα0 / r − μ ṙ` with `r(0) = 1`,
//! `ṙ(0) = −Im a0`. The total phase obeys
//! `φ̇ = −μφ − Σ α0_j / (2 r_j²) − λ log|b0|² + λ Σ log r_j`, `φ(0) = arg b0`.

use std::sync::Arc;

use num_complex::Complex64;

use super::rk4::{step_count, Rk4};
use crate::error::{Error, Result};
use crate::field::WaveField;
use crate::grid::Grid1D;

/// Widths below this abort the integration.
pub const COLLAPSE_THRESHOLD: f64 = 1e-12;

/// `α0² / r³ + 2λα0 / r − μ ṙ`.
pub fn gaussian_rhs(r: f64, rdot: f64, alpha0: f64, lambda: f64, mu: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("width must be positive, got r = {r}")));
    }
    Ok(accel(r, rdot, alpha0, lambda, mu))
}

#[inline]
fn accel(r: f64, rdot: f64, alpha0: f64, lambda: f64, mu: f64) -> f64 {
    alpha0 * alpha0 / (r * r * r) + 2.0 * lambda * alpha0 / r - mu * rdot
}

/// Instantaneous parameters of a d-dimensional centered Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub alpha0: Vec<f64>,
    pub r: Vec<f64>,
    pub rdot: Vec<f64>,
    /// Initial amplitude; `|b(t)| = |b0| / ∏ √r_j`.
    pub b0: Complex64,
    /// Total phase `φ(t)`, with `φ(0) = arg b0`.
    pub phase: f64,
    pub time: f64,
}

impl GaussianState {
    /// State at `t = 0` for `ψ0 = b0 exp(−½ Σ a0_j x_j²)`.
    pub fn from_initial(b0: Complex64, a0: &[Complex64]) -> Result<Self> {
        if a0.is_empty() {
            return Err(Error::Dimension("need at least one component".into()));
        }
        if !(b0.norm() > 0.0 && b0.re.is_finite() && b0.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("amplitude must be nonzero, got {b0}")));
        }
        if let Some(a) = a0.iter().find(|a| !(a.re > 0.0 && a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::InvalidParameter(format!("need Re a0 > 0, got {a}")));
        }
        Ok(Self {
            alpha0: a0.iter().map(|a| a.re).collect(),
            r: vec![1.0; a0.len()],
            rdot: a0.iter().map(|a| -a.im).collect(),
            b0,
            phase: b0.arg(),
            time: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.alpha0.len()
    }

    /// `|b0| / ∏ √r_j`, which is also `‖ψ‖_∞`.
    pub fn modulus_coeff(&self) -> f64 {
        self.b0.norm() / self.r.iter().product::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianTrajectory {
    pub alpha0: Vec<f64>,
    pub b0: Complex64,
    pub lambda: f64,
    pub mu: f64,
    pub times: Vec<f64>,
    /// `r[j][i]` is component `j` at `times[i]`.
    pub r: Vec<Vec<f64>>,
    pub rdot: Vec<Vec<f64>>,
    /// `∫_0^t ṙ_j²`, trapezoid rule over every integration step.
    pub dissipation: Vec<Vec<f64>>,
    pub phase: Vec<f64>,
}

impl GaussianTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.alpha0.len()
    }

    pub fn state_at(&self, i: usize) -> GaussianState {
        GaussianState {
            alpha0: self.alpha0.clone(),
            r: self.r.iter().map(|c| c[i]).collect(),
            rdot: self.rdot.iter().map(|c| c[i]).collect(),
            b0: self.b0,
            phase: self.phase[i],
            time: self.times[i],
        }
    }

    pub fn last_state(&self) -> GaussianState {
        self.state_at(self.len() - 1)
    }

    pub fn modulus_coeff(&self, i: usize) -> f64 {
        let prod: f64 = self.r.iter().map(|c| c[i]).product();
        self.b0.norm() / prod.sqrt()
    }

    /// `r̈_j` at sample `i`, from the equation of motion.
    pub fn rddot(&self, j: usize, i: usize) -> f64 {
        accel(self.r[j][i], self.rdot[j][i], self.alpha0[j], self.lambda, self.mu)
    }

    /// Index of the last sample with `times[i] <= t`.
    pub fn index_at(&self, t: f64) -> Option<usize> {
        match self.times.partition_point(|&s| s <= t) {
            0 => None,
            k => Some(k - 1),
        }
    }
}

/// Classical RK4 from `initial` to `initial.time + t_end`. Records the
/// initial sample, every `record_every`-th step and the final step.
pub fn integrate_gaussian(
    initial: &GaussianState,
    lambda: f64,
    mu: f64,
    t_end: f64,
    dt: f64,
    record_every: u64,
) -> Result<GaussianTrajectory> {
    let d = initial.dim();
    if d == 0 || initial.r.len() != d || initial.rdot.len() != d {
        return Err(Error::Dimension(format!(
            "inconsistent component counts: alpha0 {}, r {}, rdot {}",
            d,
            initial.r.len(),
            initial.rdot.len()
        )));
    }
    if initial.alpha0.iter().any(|&a| !(a > 0.0)) || initial.r.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidParameter("alpha0 and r must be positive".into()));
    }
    if !(lambda.is_finite() && mu.is_finite() && mu >= 0.0) {
        return Err(Error::InvalidParameter(format!("bad parameters lambda = {lambda}, mu = {mu}")));
    }
    let record_every = record_every.max(1);
    let n = step_count(t_end, dt)?;
    let log_b0_sq = initial.b0.norm_sqr().ln();
    let alpha0 = initial.alpha0.clone();

    // Layout: [r_0, ṙ_0, r_1, ṙ_1, …, φ].
    let mut y: Vec<f64> = Vec::with_capacity(2 * d + 1);
    for j in 0..d {
        y.push(initial.r[j]);
        y.push(initial.rdot[j]);
    }
    y.push(initial.phase);

    let rhs = |y: &[f64], dy: &mut [f64]| {
        let mut phase_drive = -lambda * log_b0_sq;
        for j in 0..d {
            let (r, v) = (y[2 * j], y[2 * j + 1]);
            dy[2 * j] = v;
            dy[2 * j + 1] = accel(r, v, alpha0[j], lambda, mu);
            phase_drive += -alpha0[j] / (2.0 * r * r) + lambda * r.ln();
        }
        dy[2 * d] = -mu * y[2 * d] + phase_drive;
    };

    let cap = (n / record_every + 2) as usize;
    let mut traj = GaussianTrajectory {
        alpha0: alpha0.clone(),
        b0: initial.b0,
        lambda,
        mu,
        times: Vec::with_capacity(cap),
        r: vec![Vec::with_capacity(cap); d],
        rdot: vec![Vec::with_capacity(cap); d],
        dissipation: vec![Vec::with_capacity(cap); d],
        phase: Vec::with_capacity(cap),
    };
    let mut diss = vec![0.0; d];
    let push = |traj: &mut GaussianTrajectory, t: f64, y: &[f64], diss: &[f64]| {
        traj.times.push(t);
        for j in 0..d {
            traj.r[j].push(y[2 * j]);
            traj.rdot[j].push(y[2 * j + 1]);
            traj.dissipation[j].push(diss[j]);
        }
        traj.phase.push(y[2 * d]);
    };
    push(&mut traj, initial.time, &y, &diss);

    let mut rk = Rk4::new(y.len());
    let mut prev_v2: Vec<f64> = (0..d).map(|j| y[2 * j + 1] * y[2 * j + 1]).collect();
    for step in 1..=n {
        rk.step(&mut y, dt, rhs);
        let t = initial.time + step as f64 * dt;
        for j in 0..d {
            let r = y[2 * j];
            if !(r >= COLLAPSE_THRESHOLD) {
                return Err(Error::Collapse { time: t, r });
            }
            let v2 = y[2 * j + 1] * y[2 * j + 1];
            diss[j] += 0.5 * dt * (prev_v2[j] + v2);
            prev_v2[j] = v2;
        }
        if step % record_every == 0 || step == n {
            push(&mut traj, t, &y, &diss);
        }
    }
    Ok(traj)
}

/// Max over samples and components of
/// `|ṙ² − ṙ(t0)² − α0² (1/r(t0)² − 1/r²) − 4λα0 log(r / r(t0)) + 2μ ∫ ṙ²|`.
pub fn first_integral_residual(traj: &GaussianTrajectory) -> f64 {
    let (lambda, mu) = (traj.lambda, traj.mu);
    let mut worst: f64 = 0.0;
    for j in 0..traj.dim() {
        let a = traj.alpha0[j];
        let (r0, v0) = (traj.r[j][0], traj.rdot[j][0]);
        for i in 0..traj.len() {
            let (r, v) = (traj.r[j][i], traj.rdot[j][i]);
            let rhs = v0 * v0 + a * a * (1.0 / (r0 * r0) - 1.0 / (r * r)) + 4.0 * lambda * a * (r / r0).ln()
                - 2.0 * mu * traj.dissipation[j][i];
            worst = worst.max((v * v - rhs).abs());
        }
    }
    worst
}

/// A-priori bounds on `r` implied by the first integral with `r(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthBounds {
    /// Largest root in `(0, 1]` of `ṙ0² + α0² (1 − 1/r²) + 4λα0 log r`.
    pub lower: f64,
    /// `exp(−(ṙ0² + α0²) / (4λα0))`; a lower bound when λ > 0 and an upper
    /// bound when λ < 0.
    pub lemma: Option<f64>,
}

pub fn width_bounds(alpha0: f64, rdot0: f64, lambda: f64) -> WidthBounds {
    let g = |r: f64| rdot0 * rdot0 + alpha0 * alpha0 * (1.0 - 1.0 / (r * r)) + 4.0 * lambda * alpha0 * r.ln();
    // g is increasing on (0, r_turn) with r_turn = √(α0 / (−2λ)) for λ < 0.
    let mut hi: f64 = if lambda < 0.0 { (alpha0 / (-2.0 * lambda)).sqrt().min(1.0) } else { 1.0 };
    let mut lo = hi;
    while g(lo) > 0.0 && lo > 1e-300 {
        lo *= 0.5;
    }
    if g(hi) <= 0.0 {
        lo = hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let lemma = (lambda != 0.0).then(|| (-(rdot0 * rdot0 + alpha0 * alpha0) / (4.0 * lambda * alpha0)).exp());
    WidthBounds { lower: lo, lemma }
}

/// Samples the d = 1 Gaussian on `grid`, centered at 0.
pub fn gaussian_to_field(state: &GaussianState, grid: Arc<Grid1D>) -> Result<WaveField> {
    if state.dim() != 1 {
        return Err(Error::Dimension(format!("grid sampling needs d = 1, state has d = {}", state.dim())));
    }
    let (a, r, v) = (state.alpha0[0], state.r[0], state.rdot[0]);
    let amp = state.modulus_coeff();
    let quad = Complex64::new(-a / (2.0 * r * r), v / (2.0 * r));
    WaveField::from_fn(grid, |x| amp * (quad * x * x + Complex64::new(0.0, state.phase)).exp())
}
