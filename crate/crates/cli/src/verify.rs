//! Re-checking run invariants from the emitted files alone.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use logsl_core::diagnostics::{csiszar_kullback_residual, log_sobolev_residual, rescaled_density};
use logsl_core::gaussian::tau_solve;
use logsl_core::{Grid1D, SpectralPlan, WaveField};
use num_complex::Complex64;

use crate::config::{parse_config, ScenarioConfig};
use crate::scenario::{
    CONFIG_FILE, DIAGNOSTICS_FILE, DIAGNOSTICS_HEADER, ERROR_FILE, RESCALED_Y_RANGE, SNAPSHOT_DIR, SNAPSHOT_HEADER,
    SUMMARY_FILE, SUMMARY_HEADER,
};

pub const MASS_DRIFT_TOL: f64 = 1e-9;
/// Per-row slack on `E^ε(t_{k+1}) − E^ε(t_k)`, relative to `|E^ε(0)|`.
pub const ENERGY_SLACK: f64 = 1e-6;
pub const LSI_TOL: f64 = -1e-8;
pub const CK_TOL: f64 = -1e-6;
pub const LSI_ALPHAS: [f64; 3] = [0.5, 1.0, 2.0];
const DENSITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub dir: PathBuf,
    pub violations: Vec<String>,
    /// Findings that do not fail verification: energy rises beyond the slack,
    /// which the first-order splitting produces where the physical
    /// dissipation rate is still near zero.
    pub warnings: Vec<String>,
    pub snapshots_checked: usize,
    /// Smallest log-Sobolev residual over snapshots and `α`.
    pub lsi_min: Option<f64>,
    /// Smallest Csiszár–Kullback residual over rescaled snapshots.
    pub ck_min: Option<f64>,
}

impl RunReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies `dir` if it holds a run, otherwise every run directory directly
/// below it.
pub fn verify(dir: &Path) -> Result<Vec<RunReport>> {
    if dir.join(DIAGNOSTICS_FILE).exists() || dir.join(ERROR_FILE).exists() {
        return Ok(vec![verify_run(dir)]);
    }
    let mut runs: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join(DIAGNOSTICS_FILE).exists() || p.join(ERROR_FILE).exists())
        .collect();
    if runs.is_empty() {
        bail!("no run directories under {}", dir.display());
    }
    runs.sort();
    Ok(runs.iter().map(|p| verify_run(p)).collect())
}

fn parse_row(line: &str, width: usize, lineno: usize, file: &str) -> Result<Vec<Option<f64>>, String> {
    let cells: Vec<&str> = line.split(',').collect();
    if cells.len() != width {
        return Err(format!("{file} line {lineno}: {} fields, expected {width}", cells.len()));
    }
    cells
        .iter()
        .map(|c| {
            if c.is_empty() {
                return Ok(None);
            }
            match c.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Some(v)),
                _ => Err(format!("{file} line {lineno}: bad number {c:?}")),
            }
        })
        .collect()
}

struct Diagnostics {
    t: Vec<f64>,
    mass: Vec<f64>,
    e_reg: Vec<f64>,
}

fn read_diagnostics(path: &Path, v: &mut Vec<String>) -> Option<Diagnostics> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            v.push(format!("cannot read {DIAGNOSTICS_FILE}: {e}"));
            return None;
        }
    };
    let mut lines = text.lines();
    if lines.next() != Some(DIAGNOSTICS_HEADER) {
        v.push(format!("{DIAGNOSTICS_FILE} header differs from {DIAGNOSTICS_HEADER:?}"));
        return None;
    }
    let width = DIAGNOSTICS_HEADER.split(',').count();
    let mut d = Diagnostics { t: Vec::new(), mass: Vec::new(), e_reg: Vec::new() };
    for (i, line) in lines.enumerate() {
        let cells = match parse_row(line, width, i + 2, DIAGNOSTICS_FILE) {
            Ok(c) => c,
            Err(e) => {
                v.push(e);
                return None;
            }
        };
        // Only the profile distance may be empty.
        if cells[..width - 1].iter().any(Option::is_none) {
            v.push(format!("{DIAGNOSTICS_FILE} line {}: empty required field", i + 2));
            return None;
        }
        let c: Vec<f64> = cells.iter().map(|c| c.unwrap_or(0.0)).collect();
        if c[7] < 0.0 || c[6] < 0.0 || c[8] < 0.0 {
            v.push(format!("{DIAGNOSTICS_FILE} line {}: negative norm or moment", i + 2));
        }
        d.t.push(c[0]);
        d.mass.push(c[1]);
        d.e_reg.push(c[2]);
    }
    if d.t.is_empty() {
        v.push(format!("{DIAGNOSTICS_FILE} has no rows"));
        return None;
    }
    if d.t.windows(2).any(|w| w[1] <= w[0]) {
        v.push("diagnostic times are not strictly increasing".into());
    }
    Some(d)
}

fn read_snapshot(path: &Path, v: &mut Vec<String>) -> Option<(Vec<f64>, Vec<Complex64>)> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let text = fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    if lines.next() != Some(SNAPSHOT_HEADER) {
        v.push(format!("{name}: header differs from {SNAPSHOT_HEADER:?}"));
        return None;
    }
    let mut xs = Vec::new();
    let mut vals = Vec::new();
    for (i, line) in lines.enumerate() {
        let cells = match parse_row(line, 4, i + 2, &name) {
            Ok(c) if c.iter().all(Option::is_some) => c.into_iter().map(Option::unwrap).collect::<Vec<_>>(),
            Ok(_) => {
                v.push(format!("{name} line {}: empty field", i + 2));
                return None;
            }
            Err(e) => {
                v.push(e);
                return None;
            }
        };
        let z = Complex64::new(cells[1], cells[2]);
        if (z.norm_sqr() - cells[3]).abs() > DENSITY_TOL * (1.0 + cells[3]) {
            v.push(format!("{name} line {}: density differs from re² + im²", i + 2));
        }
        xs.push(cells[0]);
        vals.push(z);
    }
    Some((xs, vals))
}

fn snapshot_time(path: &Path) -> Option<f64> {
    path.file_stem()?.to_str()?.strip_prefix("t_")?.parse().ok()
}

pub fn verify_run(dir: &Path) -> RunReport {
    let mut v = Vec::new();
    let mut report = RunReport {
        dir: dir.to_path_buf(),
        violations: Vec::new(),
        warnings: Vec::new(),
        snapshots_checked: 0,
        lsi_min: None,
        ck_min: None,
    };
    if let Ok(msg) = fs::read_to_string(dir.join(ERROR_FILE)) {
        v.push(format!("run aborted: {}", msg.trim()));
    }
    let config: Option<ScenarioConfig> = match parse_config(&dir.join(CONFIG_FILE)) {
        Ok(c) => Some(c),
        Err(e) => {
            v.push(format!("{CONFIG_FILE}: {e}"));
            None
        }
    };
    match fs::read_to_string(dir.join(SUMMARY_FILE)) {
        Ok(s) if s.lines().next() == Some(SUMMARY_HEADER) => {}
        Ok(_) => v.push(format!("{SUMMARY_FILE} header differs from {SUMMARY_HEADER:?}")),
        Err(_) if v.is_empty() => v.push(format!("missing {SUMMARY_FILE}")),
        Err(_) => {}
    }

    let diag = read_diagnostics(&dir.join(DIAGNOSTICS_FILE), &mut v);
    if let Some(d) = &diag {
        let m0 = d.mass[0];
        let drift = d.mass.iter().map(|m| ((m - m0) / m0).abs()).fold(0.0, f64::max);
        if drift > MASS_DRIFT_TOL {
            v.push(format!("mass drift {drift:e} exceeds {MASS_DRIFT_TOL:e}"));
        }
        if config.as_ref().is_some_and(|c| c.params.mu > 0.0) {
            let slack = ENERGY_SLACK * d.e_reg[0].abs();
            let rises: Vec<usize> = (1..d.e_reg.len()).filter(|&k| d.e_reg[k] - d.e_reg[k - 1] > slack).collect();
            if let (Some(&k), n) = (rises.first(), rises.len()) {
                let worst = rises.iter().map(|&k| d.e_reg[k] - d.e_reg[k - 1]).fold(0.0, f64::max);
                report.warnings.push(format!(
                    "energy rises beyond {ENERGY_SLACK:e}·|E(0)| in {n} interval(s), first ending at t = {}, worst {:e}·|E(0)|",
                    d.t[k],
                    worst / d.e_reg[0].abs()
                ));
            }
        }
    }

    if let Some(c) = &config {
        check_snapshots(dir, c, diag.as_ref().map(|d| d.mass[0]), &mut v, &mut report);
    }
    report.violations = v;
    report
}

fn check_snapshots(dir: &Path, c: &ScenarioConfig, mass0: Option<f64>, v: &mut Vec<String>, report: &mut RunReport) {
    let grid = match c.grid() {
        Ok(g) => Arc::new(g),
        Err(e) => {
            v.push(format!("grid: {e}"));
            return;
        }
    };
    let mut files: Vec<PathBuf> = match fs::read_dir(dir.join(SNAPSHOT_DIR)) {
        Ok(rd) => rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "csv")).collect(),
        Err(_) => {
            v.push(format!("missing {SNAPSHOT_DIR}/"));
            return;
        }
    };
    files.sort();
    let plan = SpectralPlan::new(grid.clone());
    let scaling = if c.params.lambda > 0.0 {
        tau_solve(c.params.lambda, c.params.mu, c.t_max, c.dt, c.diagnostics_stride).ok()
    } else {
        None
    };
    let (ya, yb, yn) = RESCALED_Y_RANGE;
    let y_grid = Arc::new(Grid1D::new(ya, yb, yn).expect("static grid"));

    for path in &files {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let Some(t) = snapshot_time(path) else {
            v.push(format!("{name}: cannot read the time from the file name"));
            continue;
        };
        let Some((xs, vals)) = read_snapshot(path, v) else { continue };
        if xs.len() != grid.n() || xs.iter().zip(grid.points()).any(|(a, b)| (a - b).abs() > 1e-9 * (1.0 + b.abs())) {
            v.push(format!("{name}: x column does not match the configured grid"));
            continue;
        }
        report.snapshots_checked += 1;
        let field = match WaveField::new(grid.clone(), vals) {
            Ok(f) => f,
            Err(e) => {
                v.push(format!("{name}: {e}"));
                continue;
            }
        };
        let rho = field.density();
        if let Some(m0) = mass0 {
            let m = grid.integrate(&rho);
            if ((m - m0) / m0).abs() > MASS_DRIFT_TOL {
                v.push(format!("{name}: mass {m} differs from the initial {m0}"));
            }
        }
        for alpha in LSI_ALPHAS {
            if let Ok(r) = log_sobolev_residual(&plan, &rho, alpha) {
                report.lsi_min = Some(report.lsi_min.map_or(r, |m: f64| m.min(r)));
                if r < LSI_TOL {
                    v.push(format!("{name}: log-Sobolev residual {r:e} at alpha = {alpha}"));
                }
            }
        }
        // At t = 0 the rescaling is the identity and says nothing about the limit.
        if let (Some(s), true) = (&scaling, t > 0.0) {
            if let Some(tau) = s.tau_at(t) {
                if let Some(r) = mass_matched_ck(&field, tau, &y_grid) {
                    report.ck_min = Some(report.ck_min.map_or(r, |m: f64| m.min(r)));
                    if r < CK_TOL {
                        v.push(format!("{name}: Csiszar-Kullback residual {r:e}"));
                    }
                }
            }
        }
    }
    if report.snapshots_checked == 0 {
        v.push("no readable snapshots".into());
    }
}

/// Csiszár–Kullback residual of the rescaled density normalized to the mass
/// of `Γ` on `y_grid`.
pub fn mass_matched_ck(field: &WaveField, tau: f64, y_grid: &Arc<Grid1D>) -> Option<f64> {
    let r = rescaled_density(field, tau, y_grid.clone()).ok()?;
    let m = y_grid.integrate(&r.values);
    if m <= 0.0 {
        return None;
    }
    let gamma: f64 = y_grid.integrate(&logsl_core::diagnostics::standard_profile(y_grid));
    let scaled: Vec<f64> = r.values.iter().map(|v| v * gamma / m).collect();
    csiszar_kullback_residual(y_grid, &scaled).ok()
}
