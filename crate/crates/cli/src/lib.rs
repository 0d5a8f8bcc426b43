//! Scenario presets, configuration files, CSV emission and verification for
//! the logarithmic Schrödinger-Langevin solver in `logsl-core`.

pub mod config;
pub mod oracle;
pub mod scenario;
pub mod verify;

use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use logsl_core::PhaseBranch;
use rayon::prelude::*;

pub use config::{parse_config, parse_config_str, preset, resolve, ConfigError, InitialData, ScenarioConfig};
pub use scenario::{run_scenario, RunOutput, RunSummary};
pub use verify::{verify, RunReport};

/// Runs independent scenarios, each into `out/<name>`, on up to `jobs`
/// threads. Results keep the order of `configs`.
pub fn run_all(configs: &[ScenarioConfig], out: &Path, jobs: usize, branch: PhaseBranch) -> Result<Vec<Result<RunOutput>>> {
    let mut names: Vec<&str> = configs.iter().map(|c| c.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        bail!("two scenarios are named {:?}; output directories would collide", w[0]);
    }
    let dirs: Vec<PathBuf> = configs.iter().map(|c| out.join(&c.name)).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    Ok(pool.install(|| configs.par_iter().zip(&dirs).map(|(c, d)| run_scenario(c, d, branch)).collect()))
}
