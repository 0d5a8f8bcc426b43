use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use logsl_cli::oracle::{run_oracle, OracleRequest};
use logsl_cli::{resolve, run_all, verify};
use logsl_core::PhaseBranch;
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "logsl", version, about = "Logarithmic Schrödinger-Langevin simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Branch {
    Unwrapped,
    Principal,
}

#[derive(Subcommand)]
enum Command {
    /// Run presets (fig1..fig4) or configuration files; each writes out/<name>/.
    Simulate {
        #[arg(required = true)]
        targets: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Phase branch used by the friction substep.
        #[arg(long, value_enum, default_value = "unwrapped")]
        branch: Branch,
    },
    /// Integrate the Gaussian ODE only.
    Oracle {
        /// Complex amplitude, e.g. `1` or `0.5+0.5i`.
        #[arg(long, default_value = "1", value_parser = parse_complex)]
        b0: Complex64,
        /// Complex width, once per dimension.
        #[arg(long, required = true, value_parser = parse_complex)]
        a0: Vec<Complex64>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 100)]
        record_every: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check invariants on emitted CSVs; exits nonzero on any violation.
    Verify { dir: PathBuf },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.parse::<Complex64>().map_err(|e| format!("{s:?}: {e}"))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate { targets, out, jobs, branch } => {
            let configs = targets
                .iter()
                .map(|t| resolve(t).with_context(|| format!("loading {t}")))
                .collect::<Result<Vec<_>>>()?;
            let branch = match branch {
                Branch::Unwrapped => PhaseBranch::Unwrapped,
                Branch::Principal => PhaseBranch::Principal,
            };
            let mut ok = true;
            for (config, result) in configs.iter().zip(run_all(&configs, &out, jobs, branch)?) {
                match result {
                    Ok(run) => println!("{}: wrote {}", config.name, run.dir.display()),
                    Err(e) => {
                        ok = false;
                        eprintln!("{}: {e:#}", config.name);
                    }
                }
            }
            Ok(ok)
        }
        Command::Oracle { b0, a0, lambda, mu, t_end, dt, record_every, out } => {
            let req = OracleRequest { b0, a0, lambda, mu, t_end, dt, record_every };
            let summary = run_oracle(&req, &out)?;
            print!("{}", summary.to_csv());
            Ok(true)
        }
        Command::Verify { dir } => {
            let reports = verify(&dir)?;
            let mut ok = true;
            for r in &reports {
                if r.ok() {
                    let min = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.3e}"));
                    println!(
                        "ok   {} ({} snapshots, log-Sobolev min {}, Csiszar-Kullback min {})",
                        r.dir.display(),
                        r.snapshots_checked,
                        min(r.lsi_min),
                        min(r.ck_min)
                    );
                    for w in &r.warnings {
                        println!("     warning: {w}");
                    }
                } else {
                    ok = false;
                    println!("FAIL {}", r.dir.display());
                    for v in &r.violations {
                        println!("     {v}");
                    }
                }
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
