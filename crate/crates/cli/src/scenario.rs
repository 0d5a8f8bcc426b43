//! Running a scenario and writing its CSV artifacts.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use logsl_core::diagnostics::fit_power_law;
use logsl_core::gaussian::{first_integral_residual, gaussian_to_field, integrate_gaussian, tau_solve, GaussianState};
use logsl_core::splitting::{run_simulation_with, Record};
use logsl_core::{DiagnosticsRow, Grid1D, PhaseBranch, ProfileTarget, SplittingConfig, WaveField};

use crate::config::{InitialData, ScenarioConfig};

pub const DIAGNOSTICS_HEADER: &str = "t,mass,e_reg,e_kin_total,e_pot_log,mean_x,mean_x2,linf,l1_profile_dist";
pub const SNAPSHOT_HEADER: &str = "x,re,im,density";
pub const SUMMARY_HEADER: &str = "key,value";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const CONFIG_FILE: &str = "config.txt";
pub const SNAPSHOT_DIR: &str = "snapshots";
/// Present only when a run aborted.
pub const ERROR_FILE: &str = "ERROR";

/// Reference grid for rescaled densities; `Γ = e^{−y²}` is below 2e−7 outside.
pub const RESCALED_Y_RANGE: (f64, f64, usize) = (-4.0, 4.0, 400);

/// Float formatting shared by every CSV: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn snapshot_file_name(t: f64) -> String {
    format!("t_{t:020.9}.csv")
}

/// Window for the `‖ψ‖_∞` power-law fit: the published `[200, 1000]` when the
/// run reaches it, otherwise the last 80% of the run.
pub fn linf_fit_window(t_max: f64) -> (f64, f64) {
    if t_max >= 1000.0 {
        (200.0, 1000.0)
    } else {
        (0.2 * t_max, t_max)
    }
}

pub fn diagnostics_line(row: &DiagnosticsRow) -> String {
    let l1 = row.l1_profile_dist.map(fmt_f64).unwrap_or_default();
    [row.t, row.mass, row.e_reg, row.e_kin_total, row.e_pot_log, row.mean_x, row.mean_x2, row.linf]
        .iter()
        .map(|&v| fmt_f64(v))
        .chain(std::iter::once(l1))
        .collect::<Vec<_>>()
        .join(",")
}

fn write_snapshot(path: &Path, field: &WaveField) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{SNAPSHOT_HEADER}")?;
    for (x, v) in field.grid().points().iter().zip(field.values()) {
        writeln!(w, "{},{},{},{}", fmt_f64(*x), fmt_f64(v.re), fmt_f64(v.im), fmt_f64(v.norm_sqr()))?;
    }
    w.flush()
}

/// Reference profile used for the `l1_profile_dist` column.
pub fn profile_target(config: &ScenarioConfig) -> Result<Option<ProfileTarget>> {
    let lambda = config.params.lambda;
    if lambda < 0.0 {
        Ok(Some(ProfileTarget::Gausson { lambda }))
    } else if lambda > 0.0 {
        let scaling = tau_solve(lambda, config.params.mu, config.t_max, config.dt, config.diagnostics_stride)?;
        let (a, b, n) = RESCALED_Y_RANGE;
        Ok(Some(ProfileTarget::Rescaled { scaling, y_grid: Arc::new(Grid1D::new(a, b, n)?) }))
    } else {
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub entries: Vec<(String, String)>,
}

impl RunSummary {
    fn push(&mut self, key: &str, value: String) {
        self.entries.push((key.to_string(), value));
    }

    fn push_f64(&mut self, key: &str, value: f64) {
        self.push(key, fmt_f64(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key)?.parse().ok()
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("{SUMMARY_HEADER}\n");
        for (k, v) in &self.entries {
            s.push_str(&format!("{k},{v}\n"));
        }
        s
    }
}

fn summarize(config: &ScenarioConfig, branch: PhaseBranch, rows: &[DiagnosticsRow], last: &WaveField) -> RunSummary {
    let mut s = RunSummary { entries: Vec::new() };
    s.push("name", config.name.clone());
    s.push("branch", format!("{branch:?}").to_lowercase());
    s.push("steps", config.n_steps().to_string());
    let first = &rows[0];
    let end = rows.last().expect("at least one row");
    s.push_f64("t_final", end.t);
    s.push_f64("mass_initial", first.mass);
    let drift = rows.iter().map(|r| ((r.mass - first.mass) / first.mass).abs()).fold(0.0, f64::max);
    s.push_f64("mass_drift_max_rel", drift);
    let rise = rows.windows(2).map(|w| w[1].e_reg - w[0].e_reg).fold(f64::NEG_INFINITY, f64::max);
    s.push_f64("energy_max_increase_rel", rise / first.e_reg.abs());
    s.push_f64("e_reg_initial", first.e_reg);
    s.push_f64("e_reg_final", end.e_reg);

    let times: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let linf: Vec<f64> = rows.iter().map(|r| r.linf).collect();
    let window = linf_fit_window(config.t_max);
    let (p, c) = match fit_power_law(&times, &linf, window) {
        Ok(fit) => (fmt_f64(fit.exponent), fmt_f64(fit.coeff)),
        Err(_) => (String::new(), String::new()),
    };
    s.push("linf_exponent", p);
    s.push("linf_coeff", c);
    s.push_f64("linf_fit_t_lo", window.0);
    s.push_f64("linf_fit_t_hi", window.1);

    let at = |t: f64| rows.iter().find(|r| (r.t - t).abs() < 0.5 * config.dt).and_then(|r| r.l1_profile_dist);
    for (key, t) in [("l1_profile_dist_t10", 10.0), ("l1_profile_dist_t100", 100.0), ("l1_profile_dist_t500", 500.0)] {
        s.push(key, at(t).map(fmt_f64).unwrap_or_default());
    }
    s.push("l1_profile_dist_final", end.l1_profile_dist.map(fmt_f64).unwrap_or_default());
    s.push_f64("mean_x_final", end.mean_x);
    let second = rows.iter().map(|r| r.mean_x2 * r.mass).fold(0.0, f64::max);
    s.push_f64("second_moment_sup", second);

    if let InitialData::Gaussian { b0, a0, .. } = config.initial {
        if let Ok(oracle) = gaussian_oracle_error(config, b0, a0, last) {
            s.push_f64("oracle_first_integral_residual", oracle.0);
            s.push_f64("oracle_modulus_rel_l2_final", oracle.1);
        }
    }
    s
}

/// First-integral residual of the ODE reduction and the relative L² modulus
/// gap between `last` and the ODE field at the final time. Only centered
/// Gaussians have an ODE counterpart.
fn gaussian_oracle_error(
    config: &ScenarioConfig,
    b0: num_complex::Complex64,
    a0: num_complex::Complex64,
    last: &WaveField,
) -> Result<(f64, f64)> {
    let InitialData::Gaussian { center, .. } = config.initial else { unreachable!() };
    anyhow::ensure!(center == 0.0, "only centered data has an ODE counterpart");
    let p = config.params;
    let state = GaussianState::from_initial(b0, &[a0])?;
    let stride = config.n_steps().max(1);
    let traj = integrate_gaussian(&state, p.lambda, p.mu, config.t_max, config.dt, stride)?;
    let oracle = gaussian_to_field(&traj.last_state(), last.grid_arc().clone())?;
    let (num, den) = last
        .modulus()
        .iter()
        .zip(oracle.modulus())
        .fold((0.0, 0.0), |(n, d), (a, b)| (n + (a - b) * (a - b), d + b * b));
    Ok((first_integral_residual(&traj), (num / den).sqrt()))
}

/// Paths of a finished run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub dir: PathBuf,
    pub summary: RunSummary,
    pub rows: Vec<DiagnosticsRow>,
}

/// Runs `config` and writes `config.txt`, `diagnostics.csv`, `snapshots/` and
/// `summary.csv` under `out_dir`. On a non-finite abort the rows written so far
/// stay on disk next to an `ERROR` file naming the last good time.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path, branch: PhaseBranch) -> Result<RunOutput> {
    config.validate()?;
    let snap_dir = out_dir.join(SNAPSHOT_DIR);
    fs::create_dir_all(&snap_dir).with_context(|| format!("creating {}", snap_dir.display()))?;
    let _ = fs::remove_file(out_dir.join(ERROR_FILE));
    fs::write(out_dir.join(CONFIG_FILE), config.to_config_string())?;

    let grid = Arc::new(config.grid()?);
    let initial = config.initial.sample(grid, config.params.lambda)?;
    let target = profile_target(config)?;
    let sim = SplittingConfig {
        params: config.params,
        dt: config.dt,
        t_max: config.t_max,
        snapshot_stride: config.snapshot_stride,
        diagnostics_stride: config.diagnostics_stride,
        branch,
    };

    let diag_path = out_dir.join(DIAGNOSTICS_FILE);
    let mut diag = BufWriter::new(File::create(&diag_path).with_context(|| format!("creating {}", diag_path.display()))?);
    writeln!(diag, "{DIAGNOSTICS_HEADER}")?;
    let mut rows = Vec::new();
    let mut io_error: Option<std::io::Error> = None;

    let result = run_simulation_with(initial, &sim, target.as_ref(), |record| {
        if io_error.is_some() {
            return;
        }
        let written = match record {
            Record::Row(row) => {
                rows.push(row.clone());
                writeln!(diag, "{}", diagnostics_line(row))
            }
            Record::Snapshot { t, field, .. } => write_snapshot(&snap_dir.join(snapshot_file_name(t)), field),
        };
        io_error = written.err();
    });
    diag.flush()?;
    if let Some(e) = io_error {
        return Err(e).context("writing run output");
    }
    let last = match result {
        Ok(field) => field,
        Err(e) => {
            fs::write(out_dir.join(ERROR_FILE), format!("{e}\n"))?;
            return Err(e).context(format!("scenario {} aborted", config.name));
        }
    };

    let summary = summarize(config, branch, &rows, &last);
    fs::write(out_dir.join(SUMMARY_FILE), summary.to_csv())?;
    Ok(RunOutput { dir: out_dir.to_path_buf(), summary, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_keeps_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
        let v = std::f64::consts::PI;
        assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn snapshot_names_sort_by_time() {
        let names: Vec<String> = [0.0, 2.5, 10.0, 999.999].iter().map(|&t| snapshot_file_name(t)).collect();
        assert_eq!(names[0], "t_0000000000.000000000.csv");
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(sorted, names);
    }

    #[test]
    fn missing_distance_is_an_empty_cell() {
        let row = DiagnosticsRow {
            t: 0.0,
            mass: 1.0,
            e_reg: 0.0,
            e_kin_total: 0.0,
            e_pot_log: 0.0,
            mean_x: 0.0,
            mean_x2: 0.0,
            linf: 1.0,
            l1_profile_dist: None,
        };
        let line = diagnostics_line(&row);
        assert!(line.ends_with(','));
        assert_eq!(line.split(',').count(), DIAGNOSTICS_HEADER.split(',').count());
    }
}
