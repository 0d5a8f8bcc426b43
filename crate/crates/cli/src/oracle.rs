//! Gaussian ODE runs without the PDE solver.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use logsl_core::diagnostics::fit_power_law;
use logsl_core::gaussian::{
    asymptotic_constants, first_integral_residual, integrate_gaussian, width_bounds, AsymptoticConstants, GaussianState,
    GaussianTrajectory,
};
use num_complex::Complex64;

use crate::scenario::{fmt_f64, RunSummary};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRequest {
    pub b0: Complex64,
    /// One entry per dimension.
    pub a0: Vec<Complex64>,
    pub lambda: f64,
    pub mu: f64,
    pub t_end: f64,
    pub dt: f64,
    pub record_every: u64,
}

fn header(dim: usize) -> String {
    let mut cols = vec!["t".to_string()];
    for j in 1..=dim {
        cols.push(format!("r_{j}"));
        cols.push(format!("rdot_{j}"));
        cols.push(format!("dissipation_{j}"));
    }
    cols.push("phase".into());
    cols.push("linf".into());
    cols.join(",")
}

/// Fit window over the last decade of the run.
fn last_decade(t_end: f64) -> (f64, f64) {
    (0.1 * t_end, t_end)
}

fn summarize(req: &OracleRequest, traj: &GaussianTrajectory) -> RunSummary {
    let mut s = RunSummary { entries: Vec::new() };
    let mut push = |k: &str, v: String| s.entries.push((k.to_string(), v));
    push("samples", traj.len().to_string());
    push("first_integral_residual", fmt_f64(first_integral_residual(traj)));
    let last = traj.last_state();
    for j in 0..traj.dim() {
        push(&format!("r_{}_final", j + 1), fmt_f64(last.r[j]));
        push(&format!("rdot_{}_final", j + 1), fmt_f64(last.rdot[j]));
        let bounds = width_bounds(traj.alpha0[j], -req.a0[j].im, req.lambda);
        let lo = traj.r[j].iter().cloned().fold(f64::INFINITY, f64::min);
        push(&format!("r_{}_min", j + 1), fmt_f64(lo));
        push(&format!("r_{}_lower_bound", j + 1), fmt_f64(bounds.lower));
        if req.lambda > 0.0 {
            let window = last_decade(req.t_end);
            if let Ok(f) = fit_power_law(&traj.times, &traj.r[j], window) {
                push(&format!("r_{}_exponent", j + 1), fmt_f64(f.exponent));
                push(&format!("r_{}_coeff", j + 1), fmt_f64(f.coeff));
            }
            if let Ok(f) = fit_power_law(&traj.times, &traj.rdot[j], window) {
                push(&format!("rdot_{}_exponent", j + 1), fmt_f64(f.exponent));
                push(&format!("rdot_{}_coeff", j + 1), fmt_f64(f.coeff));
            }
        }
    }
    if let (1, Ok(c)) = (
        traj.dim(),
        asymptotic_constants(traj.alpha0[0], req.b0.norm(), req.lambda, req.mu, traj.dim() as u32),
    ) {
        match c {
            AsymptoticConstants::Focusing { r_star, profile_coeff } => {
                push("predicted_r_star", fmt_f64(r_star));
                push("predicted_profile_coeff", fmt_f64(profile_coeff));
            }
            AsymptoticConstants::Defocusing { r_coeff, rdot_coeff, linf_coeff, grad_coeff } => {
                push("predicted_r_coeff", fmt_f64(r_coeff));
                push("predicted_rdot_coeff", fmt_f64(rdot_coeff));
                push("predicted_linf_coeff", fmt_f64(linf_coeff));
                push("predicted_grad_coeff", fmt_f64(grad_coeff));
            }
        }
    }
    s
}

/// Integrates the Gaussian system and writes `trajectory.csv` and
/// `summary.csv` under `out_dir`.
pub fn run_oracle(req: &OracleRequest, out_dir: &Path) -> Result<RunSummary> {
    let state = GaussianState::from_initial(req.b0, &req.a0)?;
    let traj = integrate_gaussian(&state, req.lambda, req.mu, req.t_end, req.dt, req.record_every)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;

    let mut w = BufWriter::new(fs::File::create(out_dir.join(TRAJECTORY_FILE))?);
    writeln!(w, "{}", header(traj.dim()))?;
    for i in 0..traj.len() {
        let mut cells = vec![fmt_f64(traj.times[i])];
        for j in 0..traj.dim() {
            cells.push(fmt_f64(traj.r[j][i]));
            cells.push(fmt_f64(traj.rdot[j][i]));
            cells.push(fmt_f64(traj.dissipation[j][i]));
        }
        cells.push(fmt_f64(traj.phase[i]));
        cells.push(fmt_f64(traj.modulus_coeff(i)));
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;

    let summary = summarize(req, &traj);
    fs::write(out_dir.join(crate::scenario::SUMMARY_FILE), summary.to_csv())?;
    Ok(summary)
}
