//! Scenario configuration: presets and the flat `key=value` file format.

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use logsl_core::gaussian::Gausson;
use logsl_core::{gaussian_field, Grid1D, PhysParams, WaveField};
use num_complex::Complex64;
use thiserror::Error;

/// Snapshots written per run when no stride is given.
pub const DEFAULT_SNAPSHOTS: u64 = 500;
pub const DEFAULT_DIAGNOSTICS_STRIDE: u64 = 100;

pub const PRESETS: [&str; 4] = ["fig1", "fig2", "fig3", "fig4"];

/// Every accepted key, in write-back order.
pub const KEYS: [&str; 12] =
    ["name", "initial", "lambda", "mu", "eps", "a", "b", "n", "dt", "t_max", "snapshot_stride", "diagnostics_stride"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key {key:?}")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: cannot parse {key} from {value:?}")]
    Value { line: usize, key: String, value: String },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("missing key {0:?}")]
    Missing(&'static str),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    /// `|sin x| e^{−0.1(x−3)²} + |cos x| e^{−0.2(x+4)²}`.
    ExprFig1,
    /// `e^{−(x−10)² + 100ix} + e^{−(x+10)² − 100ix}`.
    ExprFig4,
    Gaussian { b0: Complex64, a0: Complex64, center: f64 },
    /// Real Gausson profile of the given mass; requires `λ < 0`.
    Gausson { mass: f64 },
}

impl InitialData {
    pub fn is_gaussian(&self) -> bool {
        matches!(self, InitialData::Gaussian { .. })
    }

    pub fn sample(&self, grid: Arc<Grid1D>, lambda: f64) -> logsl_core::Result<WaveField> {
        match *self {
            InitialData::ExprFig1 => WaveField::from_fn(grid, |x| {
                let v = x.sin().abs() * (-0.1 * (x - 3.0) * (x - 3.0)).exp()
                    + x.cos().abs() * (-0.2 * (x + 4.0) * (x + 4.0)).exp();
                Complex64::new(v, 0.0)
            }),
            InitialData::ExprFig4 => WaveField::from_fn(grid, |x| {
                Complex64::from_polar((-(x - 10.0) * (x - 10.0)).exp(), 100.0 * x)
                    + Complex64::from_polar((-(x + 10.0) * (x + 10.0)).exp(), -100.0 * x)
            }),
            InitialData::Gaussian { b0, a0, center } => gaussian_field(grid, b0, a0, center),
            InitialData::Gausson { mass } => {
                let g = Gausson::mass_matched(mass, lambda, 1)?;
                WaveField::from_fn(grid, |x| Complex64::new(g.modulus(x * x), 0.0))
            }
        }
    }

    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s {
            "expr_fig1" => return Some(InitialData::ExprFig1),
            "expr_fig4" => return Some(InitialData::ExprFig4),
            _ => {}
        }
        let (head, rest) = s.split_once('(')?;
        let args: Vec<&str> = rest.strip_suffix(')')?.split(',').map(str::trim).collect();
        match (head.trim(), args.as_slice()) {
            ("gaussian", [b0, a0, center]) => Some(InitialData::Gaussian {
                b0: parse_complex(b0)?,
                a0: parse_complex(a0)?,
                center: parse_f64(center)?,
            }),
            ("gausson", [mass]) => Some(InitialData::Gausson { mass: parse_f64(mass)? }),
            _ => None,
        }
    }
}

impl fmt::Display for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialData::ExprFig1 => write!(f, "expr_fig1"),
            InitialData::ExprFig4 => write!(f, "expr_fig4"),
            InitialData::Gaussian { b0, a0, center } => {
                write!(f, "gaussian({}, {}, {center:?})", fmt_complex(*b0), fmt_complex(*a0))
            }
            InitialData::Gausson { mass } => write!(f, "gausson({mass:?})"),
        }
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:?}{}{:?}i", z.re, if z.im.is_sign_negative() { "-" } else { "+" }, z.im.abs())
}

fn parse_f64(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_complex(s: &str) -> Option<Complex64> {
    s.trim().parse::<Complex64>().ok().filter(|z| z.re.is_finite() && z.im.is_finite())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub initial: InitialData,
    pub params: PhysParams,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub dt: f64,
    pub t_max: f64,
    pub snapshot_stride: u64,
    pub diagnostics_stride: u64,
}

impl ScenarioConfig {
    pub fn n_steps(&self) -> u64 {
        (self.t_max / self.dt).round() as u64
    }

    pub fn grid(&self) -> logsl_core::Result<Grid1D> {
        Grid1D::new(self.a, self.b, self.n)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return bad(format!("name {:?} must be a nonempty plain file name", self.name));
        }
        self.params.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.grid().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if !self.n.is_multiple_of(2) {
            return bad(format!("n = {} must be even", self.n));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) || !(self.t_max >= self.dt && self.t_max.is_finite()) {
            return bad(format!("need 0 < dt <= t_max, got dt = {}, t_max = {}", self.dt, self.t_max));
        }
        if self.snapshot_stride == 0 || self.diagnostics_stride == 0 {
            return bad("strides must be at least 1".into());
        }
        if let InitialData::Gausson { mass } = self.initial {
            if !(self.params.lambda < 0.0 && mass > 0.0) {
                return bad("gausson initial data needs lambda < 0 and mass > 0".into());
            }
        }
        Ok(())
    }

    /// Normalized `key=value` text; parsing it yields `self` again.
    pub fn to_config_string(&self) -> String {
        let p = &self.params;
        let values = [
            self.name.clone(),
            self.initial.to_string(),
            format!("{:?}", p.lambda),
            format!("{:?}", p.mu),
            format!("{:?}", p.eps),
            format!("{:?}", self.a),
            format!("{:?}", self.b),
            self.n.to_string(),
            format!("{:?}", self.dt),
            format!("{:?}", self.t_max),
            self.snapshot_stride.to_string(),
            self.diagnostics_stride.to_string(),
        ];
        KEYS.iter().zip(values).map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

fn snapshot_stride_for(t_max: f64, dt: f64) -> u64 {
    let steps = (t_max / dt).round() as u64;
    steps.div_ceil(DEFAULT_SNAPSHOTS).max(1)
}

pub fn preset(name: &str) -> Result<ScenarioConfig, ConfigError> {
    let (lambda, mu, dt, t_max, initial) = match name {
        "fig1" => (-0.1, 1.0, 1e-3, 1000.0, InitialData::ExprFig1),
        "fig2" => (0.1, 1.0, 1e-3, 1000.0, InitialData::ExprFig1),
        "fig3" => (0.0, 0.0, 1e-4, 10.0, InitialData::ExprFig4),
        "fig4" => (-0.1, 10.0, 1e-4, 10.0, InitialData::ExprFig4),
        _ => return Err(ConfigError::UnknownPreset(name.to_string())),
    };
    Ok(ScenarioConfig {
        name: name.to_string(),
        initial,
        params: PhysParams { lambda, mu, eps: 1e-3 },
        a: -100.0,
        b: 100.0,
        n: 1000,
        dt,
        t_max,
        snapshot_stride: snapshot_stride_for(t_max, dt),
        diagnostics_stride: DEFAULT_DIAGNOSTICS_STRIDE,
    })
}

pub fn parse_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
    parse_config_str(&text)
}

/// Blank lines and `#` comments are ignored. With `initial=preset:<name>` the
/// preset supplies every key not listed; otherwise `initial`, `lambda`, `mu`,
/// `eps`, `a`, `b`, `n`, `dt` and `t_max` are required.
pub fn parse_config_str(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut entries: Vec<(usize, &'static str, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(ConfigError::Syntax { line, text: raw.to_string() });
        };
        let k = k.trim();
        let Some(key) = KEYS.iter().copied().find(|&known| known == k) else {
            return Err(ConfigError::UnknownKey { line, key: k.to_string() });
        };
        if entries.iter().any(|&(_, seen, _)| seen == key) {
            return Err(ConfigError::DuplicateKey { line, key: k.to_string() });
        }
        entries.push((line, key, v.trim()));
    }

    let get = |key: &str| entries.iter().find(|&&(_, k, _)| k == key).map(|&(l, _, v)| (l, v));
    let value_err = |line: usize, key: &str, value: &str| ConfigError::Value {
        line,
        key: key.to_string(),
        value: value.to_string(),
    };

    let base = match get("initial") {
        Some((line, v)) if v.starts_with("preset:") => {
            let name = &v["preset:".len()..];
            Some(preset(name.trim()).map_err(|_| value_err(line, "initial", v))?)
        }
        _ => None,
    };

    let real = |key: &'static str, fallback: Option<f64>| -> Result<f64, ConfigError> {
        match get(key) {
            Some((line, v)) => parse_f64(v).ok_or_else(|| value_err(line, key, v)),
            None => fallback.ok_or(ConfigError::Missing(key)),
        }
    };
    let count = |key: &'static str, fallback: Option<u64>| -> Result<Option<u64>, ConfigError> {
        match get(key) {
            Some((line, v)) => v.parse::<u64>().map(Some).map_err(|_| value_err(line, key, v)),
            None => Ok(fallback),
        }
    };

    let initial = match (get("initial"), &base) {
        (Some((_, v)), Some(b)) if v.starts_with("preset:") => b.initial,
        (Some((line, v)), _) => InitialData::parse(v).ok_or_else(|| value_err(line, "initial", v))?,
        (None, _) => return Err(ConfigError::Missing("initial")),
    };
    let lambda = real("lambda", base.as_ref().map(|b| b.params.lambda))?;
    let mu = real("mu", base.as_ref().map(|b| b.params.mu))?;
    let eps = real("eps", base.as_ref().map(|b| b.params.eps))?;
    let a = real("a", base.as_ref().map(|b| b.a))?;
    let b = real("b", base.as_ref().map(|b| b.b))?;
    let n = count("n", base.as_ref().map(|b| b.n as u64))?.ok_or(ConfigError::Missing("n"))? as usize;
    let dt = real("dt", base.as_ref().map(|b| b.dt))?;
    let t_max = real("t_max", base.as_ref().map(|b| b.t_max))?;
    // A preset's derived stride is recomputed when the run length changes.
    let snapshot_stride = count("snapshot_stride", None)?.unwrap_or_else(|| snapshot_stride_for(t_max, dt));
    let diagnostics_stride = count("diagnostics_stride", None)?
        .or(base.as_ref().map(|b| b.diagnostics_stride))
        .unwrap_or(DEFAULT_DIAGNOSTICS_STRIDE);
    let name = match get("name") {
        Some((_, v)) => v.to_string(),
        None => base.as_ref().map_or_else(|| "custom".to_string(), |b| b.name.clone()),
    };

    let config = ScenarioConfig {
        name,
        initial,
        params: PhysParams { lambda, mu, eps },
        a,
        b,
        n,
        dt,
        t_max,
        snapshot_stride,
        diagnostics_stride,
    };
    config.validate()?;
    Ok(config)
}

/// A preset name or a path to a configuration file.
pub fn resolve(target: &str) -> Result<ScenarioConfig, ConfigError> {
    if PRESETS.contains(&target) {
        preset(target)
    } else {
        parse_config(Path::new(target))
    }
}
