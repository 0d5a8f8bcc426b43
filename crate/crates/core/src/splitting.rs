//! First-order Lie-Trotter integrator for the regularized equation.
//!
//! One step of size `dt` applies, in order, the exact kinetic flow (A), the
//! logarithmic phase rotation (B) and the friction flow on the principal
//! argument (C). Each sub-flow is an l²-isometry, so the composed step
//! conserves the discrete mass up to round-off.
//!
//! The friction flow needs an argument θ for every sample. Taking the
//! principal value puts a phase kink of `2π (1 − e^{−μ dt})` wherever θ
//! crosses ±π, which the continuum flow does not have. [`PhaseBranch::Unwrapped`]
//! instead unwraps the argument along the grid at every step, anchored at the
//! largest sample. The lift is then continuous wherever the field is resolved;
//! its uniform `2πk` ambiguity only shifts the global phase.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;

use crate::diagnostics::{self, DiagnosticsRow, ProfileTarget};
use crate::error::{Error, Result};
use crate::field::WaveField;
use crate::grid::Grid1D;
use crate::params::PhysParams;
use crate::spectral::SpectralPlan;

/// Choice of the argument entering the friction flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseBranch {
    /// Principal value in `(−π, π]`, recomputed at every step.
    Principal,
    /// Spatially unwrapped argument, recomputed at every step.
    #[default]
    Unwrapped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplittingConfig {
    pub params: PhysParams,
    pub dt: f64,
    pub t_max: f64,
    pub snapshot_stride: u64,
    pub diagnostics_stride: u64,
    pub branch: PhaseBranch,
}

impl SplittingConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max.is_finite() && self.t_max >= self.dt) {
            return Err(Error::InvalidParameter(format!(
                "t_max must be at least dt, got t_max = {} with dt = {}",
                self.t_max, self.dt
            )));
        }
        if self.snapshot_stride == 0 || self.diagnostics_stride == 0 {
            return Err(Error::InvalidParameter("strides must be at least 1".into()));
        }
        if self.t_max / self.dt > u64::MAX as f64 / 2.0 {
            return Err(Error::InvalidParameter("too many steps for the step counter".into()));
        }
        Ok(())
    }

    /// Number of steps, `round(t_max / dt)`.
    pub fn n_steps(&self) -> u64 {
        (self.t_max / self.dt).round() as u64
    }
}

/// Principal value in `(-π, π]`.
#[inline]
fn wrap_phase(theta: f64) -> f64 {
    theta - TAU * ((theta - PI) / TAU).ceil()
}

/// Phase rotation `v ← v exp(-i λ dt log(|v|² + ε))`. Exact zeros stay zero.
pub fn log_flow(field: &mut WaveField, dt: f64, lambda: f64, eps: f64) {
    for v in field.values_mut() {
        let rho = v.norm_sqr();
        if rho == 0.0 {
            continue;
        }
        *v *= Complex64::from_polar(1.0, -lambda * dt * (rho + eps).ln());
    }
}

/// `m e^{iθ} ← m e^{iθ e^{-μ dt}}` with θ the principal argument.
pub fn dissipation_flow(field: &mut WaveField, dt: f64, mu: f64) {
    let q = (-mu * dt).exp();
    for v in field.values_mut() {
        let (m, theta) = v.to_polar();
        *v = if m == 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::from_polar(m, theta * q) };
    }
}

/// Spatially unwrapped argument of `field`, anchored at the principal value
/// of the largest sample and accumulated outward in both directions.
pub fn unwrap_phase(field: &WaveField) -> Vec<f64> {
    let mut lift = vec![0.0; field.values().len()];
    unwrap_into(field.values(), &mut lift);
    lift
}

fn unwrap_into(values: &[Complex64], lift: &mut [f64]) {
    let mut k0 = 0;
    let mut peak = -1.0;
    for (k, (z, th)) in values.iter().zip(lift.iter_mut()).enumerate() {
        *th = z.im.atan2(z.re);
        let rho = z.norm_sqr();
        if rho > peak {
            peak = rho;
            k0 = k;
        }
    }
    // Forward sweep keeps the previous principal value in `prev`.
    let mut prev = lift[k0];
    for k in k0 + 1..lift.len() {
        let arg = lift[k];
        lift[k] = lift[k - 1] + wrap_phase(arg - prev);
        prev = arg;
    }
    let mut prev = lift[k0];
    for k in (0..k0).rev() {
        let arg = lift[k];
        lift[k] = lift[k + 1] + wrap_phase(arg - prev);
        prev = arg;
    }
}

/// Reusable stepper holding the FFT plan, the kinetic multiplier (with the
/// inverse `1/n` folded in) and scratch space.
#[derive(Debug, Clone)]
pub struct LieTrotter {
    plan: SpectralPlan,
    multiplier: Vec<Complex64>,
    params: PhysParams,
    dt: f64,
    damping: f64,
    scratch: Vec<Complex64>,
    steps: u64,
    branch: PhaseBranch,
    /// Unwrapped argument of the field after the kinetic substep.
    lift: Vec<f64>,
}

impl LieTrotter {
    /// Stepper using the default (unwrapped) branch.
    pub fn new(grid: Arc<Grid1D>, params: PhysParams, dt: f64) -> Result<Self> {
        Self::with_branch(grid, params, dt, PhaseBranch::default())
    }

    pub fn with_branch(grid: Arc<Grid1D>, params: PhysParams, dt: f64, branch: PhaseBranch) -> Result<Self> {
        params.validate()?;
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be finite and nonzero, got {dt}")));
        }
        let plan = SpectralPlan::new(grid);
        let scale = 1.0 / plan.grid().n() as f64;
        let multiplier = plan
            .wavenumbers()
            .iter()
            .map(|&k| Complex64::from_polar(scale, -0.5 * dt * k * k))
            .collect();
        let scratch = vec![Complex64::new(0.0, 0.0); plan.scratch_len()];
        let plan_n = plan.grid().n();
        Ok(Self {
            plan,
            multiplier,
            params,
            dt,
            damping: (-params.mu * dt).exp(),
            scratch,
            steps: 0,
            branch,
            lift: vec![0.0; plan_n],
        })
    }

    pub fn plan(&self) -> &SpectralPlan {
        &self.plan
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn branch(&self) -> PhaseBranch {
        self.branch
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// `steps * dt`, accumulated without summation drift.
    pub fn time(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    /// Advances `field` by one step. On error the field contents are
    /// unspecified and the step counter is not advanced.
    pub fn step(&mut self, field: &mut WaveField) -> Result<()> {
        if field.grid() != self.plan.grid() {
            return Err(Error::GridMismatch);
        }
        let buf = field.values_mut();
        self.plan.forward_with_scratch(buf, &mut self.scratch);
        for (v, m) in buf.iter_mut().zip(&self.multiplier) {
            *v *= m;
        }
        self.plan.inverse_unnormalized_with_scratch(buf, &mut self.scratch);

        // B and C fused: one polar decomposition per point.
        let PhysParams { lambda, eps, .. } = self.params;
        let rot = lambda * self.dt;
        let q = self.damping;
        let mut finite = true;
        match self.branch {
            PhaseBranch::Principal => {
                for v in buf.iter_mut() {
                    let rho = v.norm_sqr();
                    if rho == 0.0 {
                        continue;
                    }
                    let theta = wrap_phase(v.im.atan2(v.re) - rot * (rho + eps).ln());
                    *v = Complex64::from_polar(rho.sqrt(), theta * q);
                    finite &= v.re.is_finite() && v.im.is_finite();
                }
            }
            PhaseBranch::Unwrapped => {
                unwrap_into(buf, &mut self.lift);
                for (v, &theta) in buf.iter_mut().zip(&self.lift) {
                    let rho = v.norm_sqr();
                    if rho == 0.0 {
                        continue;
                    }
                    *v = Complex64::from_polar(rho.sqrt(), (theta - rot * (rho + eps).ln()) * q);
                    finite &= v.re.is_finite() && v.im.is_finite();
                }
            }
        }
        if !finite {
            return Err(Error::NonFinite { step: self.steps + 1, time: self.time() });
        }
        self.steps += 1;
        Ok(())
    }
}

/// One A→B→C step with freshly planned transforms. Prefer [`LieTrotter`] in
/// loops.
pub fn lie_trotter_step(field: &WaveField, config: &SplittingConfig) -> Result<WaveField> {
    let mut stepper = LieTrotter::with_branch(field.grid_arc().clone(), config.params, config.dt, config.branch)?;
    let mut out = field.clone();
    stepper.step(&mut out)?;
    Ok(out)
}

/// Regularized energy dissipated by the solved equation:
/// `½∫ |ψ_x|² + λ∫ ρ log(ρ + ε) + ε log(1 + ρ/ε)` with `ρ = |ψ|²`.
///
/// The potential density is the primitive of `log(ρ + ε)` up to a multiple of
/// the conserved mass, so the functional is exact for `μ = 0` and reduces to
/// `½∫|ψ_x|² + λ∫ρ log ρ` at `ε = 0`.
pub fn energy_reg(field: &WaveField, params: &PhysParams) -> Result<f64> {
    energy_reg_with(&SpectralPlan::new(field.grid_arc().clone()), field, params)
}

pub fn energy_reg_with(plan: &SpectralPlan, field: &WaveField, params: &PhysParams) -> Result<f64> {
    let kinetic = 0.5 * plan.gradient_norm_sqr(field.values())?;
    let PhysParams { lambda, eps, .. } = *params;
    if lambda == 0.0 {
        return Ok(kinetic);
    }
    let potential: Vec<f64> = field
        .values()
        .iter()
        .map(|v| {
            let rho = v.norm_sqr();
            let log_term = if rho == 0.0 { 0.0 } else { rho * (rho + eps).ln() };
            let sat = if eps > 0.0 { eps * (rho / eps).ln_1p() } else { 0.0 };
            lambda * (log_term + sat)
        })
        .collect();
    Ok(kinetic + field.grid().integrate(&potential))
}

/// Energy in the displayed saturated form
/// `∫ |ψ_x|² + 2λε|ψ| + λ|ψ|² log(|ψ|² + ε) − λε² log((1 + |ψ|/ε)²)`.
/// The last term is taken as 0 when `ε = 0`.
///
/// Carries no ½ on the gradient and matches the `log((|ψ| + ε)²)`
/// regularization, so it is not monotone along this solver; kept for
/// comparison with [`energy_reg`].
pub fn energy_displayed(plan: &SpectralPlan, field: &WaveField, params: &PhysParams) -> Result<f64> {
    let kinetic = plan.gradient_norm_sqr(field.values())?;
    let PhysParams { lambda, eps, .. } = *params;
    if lambda == 0.0 {
        return Ok(kinetic);
    }
    let potential: Vec<f64> = field
        .values()
        .iter()
        .map(|v| {
            let rho = v.norm_sqr();
            let m = rho.sqrt();
            let log_term = if rho == 0.0 { 0.0 } else { rho * (rho + eps).ln() };
            let sat = if eps > 0.0 { 2.0 * eps * m - 2.0 * eps * eps * (m / eps).ln_1p() } else { 0.0 };
            lambda * (log_term + sat)
        })
        .collect();
    Ok(kinetic + field.grid().integrate(&potential))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: u64,
    pub t: f64,
    pub field: WaveField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutput {
    pub rows: Vec<DiagnosticsRow>,
    pub snapshots: Vec<Snapshot>,
    pub final_field: WaveField,
}

/// Item handed to a streaming sink by [`run_simulation_with`].
#[derive(Debug)]
pub enum Record<'a> {
    Row(&'a DiagnosticsRow),
    Snapshot { step: u64, t: f64, field: &'a WaveField },
}

/// Runs `round(t_max / dt)` steps from `initial`. Step 0, every multiple of
/// each stride and the final step are recorded. Returns the final field.
pub fn run_simulation_with<F>(
    initial: WaveField,
    config: &SplittingConfig,
    target: Option<&ProfileTarget>,
    mut sink: F,
) -> Result<WaveField>
where
    F: FnMut(Record<'_>),
{
    config.validate()?;
    if !initial.is_finite() {
        return Err(Error::NonFinite { step: 0, time: 0.0 });
    }
    let mut stepper = LieTrotter::with_branch(initial.grid_arc().clone(), config.params, config.dt, config.branch)?;
    let n_steps = config.n_steps();
    let mut field = initial;

    let record = |stepper: &LieTrotter, field: &WaveField, sink: &mut F| -> Result<()> {
        let step = stepper.steps();
        let t = stepper.time();
        let last = step == n_steps;
        if step.is_multiple_of(config.diagnostics_stride) || last {
            let row = diagnostics::diagnostics_row(stepper.plan(), field, &config.params, t, target)?;
            sink(Record::Row(&row));
        }
        if step.is_multiple_of(config.snapshot_stride) || last {
            sink(Record::Snapshot { step, t, field });
        }
        Ok(())
    };

    record(&stepper, &field, &mut sink)?;
    for _ in 0..n_steps {
        stepper.step(&mut field)?;
        record(&stepper, &field, &mut sink)?;
    }
    Ok(field)
}

/// Collecting wrapper around [`run_simulation_with`].
pub fn run_simulation(
    initial: WaveField,
    config: &SplittingConfig,
    target: Option<&ProfileTarget>,
) -> Result<SimulationOutput> {
    let mut rows = Vec::new();
    let mut snapshots = Vec::new();
    let final_field = run_simulation_with(initial, config, target, |rec| match rec {
        Record::Row(r) => rows.push(r.clone()),
        Record::Snapshot { step, t, field } => snapshots.push(Snapshot { step, t, field: field.clone() }),
    })?;
    Ok(SimulationOutput { rows, snapshots, final_field })
}
