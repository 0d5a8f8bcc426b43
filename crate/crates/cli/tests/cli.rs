use std::fs;
use std::path::Path;
use std::process::Command;

use logsl_cli::scenario::{DIAGNOSTICS_FILE, DIAGNOSTICS_HEADER, ERROR_FILE, SNAPSHOT_DIR, SUMMARY_FILE};
use logsl_cli::{parse_config_str, run_scenario, verify};
use logsl_core::PhaseBranch;

const SHORT: &str = "initial=gaussian(1, 1, 0)\nname=short\nlambda=0.1\nmu=1\neps=1e-6\n\
                     a=-30\nb=30\nn=256\ndt=1e-3\nt_max=0.5\nsnapshot_stride=100\ndiagnostics_stride=10\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logsl"))
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn scenario_writes_the_documented_layout() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config_str(SHORT).unwrap();
    let run = run_scenario(&config, dir.path(), PhaseBranch::Unwrapped).unwrap();

    let diag = read(&dir.path().join(DIAGNOSTICS_FILE));
    let mut lines = diag.lines();
    assert_eq!(lines.next(), Some(DIAGNOSTICS_HEADER));
    // 500 steps every 10, plus the initial row.
    assert_eq!(lines.count(), 51);
    assert_eq!(run.rows.len(), 51);

    let snaps: Vec<_> = fs::read_dir(dir.path().join(SNAPSHOT_DIR)).unwrap().collect();
    assert_eq!(snaps.len(), 6);
    let first = read(&dir.path().join(SNAPSHOT_DIR).join("t_0000000000.000000000.csv"));
    assert_eq!(first.lines().next(), Some("x,re,im,density"));
    assert_eq!(first.lines().count(), 257);

    let summary = read(&dir.path().join(SUMMARY_FILE));
    assert!(summary.starts_with("key,value\n"));
    assert!(run.summary.get_f64("oracle_modulus_rel_l2_final").unwrap() < 1e-3);
    assert!(run.summary.get_f64("mass_drift_max_rel").unwrap() < 1e-12);
    let config_back = parse_config_str(&read(&dir.path().join("config.txt"))).unwrap();
    assert_eq!(config_back, config);

    let reports = verify(dir.path()).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0].ok(), "{:?}", reports[0].violations);
    assert_eq!(reports[0].snapshots_checked, 6);
    assert!(reports[0].lsi_min.unwrap() >= -1e-8);
    assert!(reports[0].ck_min.unwrap() >= -1e-6);
}

#[test]
fn reruns_are_byte_identical() {
    let config = parse_config_str(SHORT).unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_scenario(&config, a.path(), PhaseBranch::Unwrapped).unwrap();
    run_scenario(&config, b.path(), PhaseBranch::Unwrapped).unwrap();
    for f in [DIAGNOSTICS_FILE, SUMMARY_FILE, "config.txt"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let snap = Path::new(SNAPSHOT_DIR).join("t_0000000000.500000000.csv");
    assert_eq!(fs::read(a.path().join(&snap)).unwrap(), fs::read(b.path().join(&snap)).unwrap());
}

#[test]
fn overflowing_run_leaves_partial_output_and_marker() {
    // λ·dt·log(ρ + ε) overflows in the first step.
    let text = SHORT.replace("lambda=0.1", "lambda=-1e308").replace("dt=1e-3", "dt=1").replace("t_max=0.5", "t_max=5");
    let config = parse_config_str(&text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let err = run_scenario(&config, dir.path(), PhaseBranch::Unwrapped).unwrap_err();
    assert!(format!("{err:#}").contains("last good time t = 0"), "{err:#}");
    let marker = read(&dir.path().join(ERROR_FILE));
    assert!(marker.contains("last good time"));
    let diag = read(&dir.path().join(DIAGNOSTICS_FILE));
    assert_eq!(diag.lines().count(), 2);
    let reports = verify(dir.path()).unwrap();
    assert!(!reports[0].ok());
}

#[test]
fn verify_flags_tampered_mass() {
    let dir = tempfile::tempdir().unwrap();
    run_scenario(&parse_config_str(SHORT).unwrap(), dir.path(), PhaseBranch::Unwrapped).unwrap();
    let path = dir.path().join(DIAGNOSTICS_FILE);
    let text = read(&path);
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut cells: Vec<String> = lines[5].split(',').map(String::from).collect();
    let m: f64 = cells[1].parse().unwrap();
    cells[1] = format!("{:.16e}", m * (1.0 + 1e-6));
    lines[5] = cells.join(",");
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let report = &verify(dir.path()).unwrap()[0];
    assert!(report.violations.iter().any(|v| v.contains("mass drift")), "{:?}", report.violations);
}

#[test]
fn binary_simulate_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("short.txt");
    fs::write(&cfg, SHORT).unwrap();
    let out = dir.path().join("runs");
    let status = bin().args(["simulate", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", "2"]).status().unwrap();
    assert!(status.success());
    assert!(out.join("short").join(DIAGNOSTICS_FILE).exists());
    let v = bin().args(["verify", out.to_str().unwrap()]).output().unwrap();
    assert!(v.status.success(), "{}", String::from_utf8_lossy(&v.stdout));
    assert!(String::from_utf8_lossy(&v.stdout).starts_with("ok"));
}

#[test]
fn binary_reports_config_errors_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.txt");
    fs::write(&cfg, "initial=preset:fig1\nlamda=0.1\n").unwrap();
    let out = bin().args(["simulate", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("lamda"), "{err}");

    let missing = bin().args(["simulate", "nope.txt", "--out", dir.path().to_str().unwrap()]).output().unwrap();
    assert!(!missing.status.success());
}

#[test]
fn binary_oracle_writes_a_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["oracle", "--a0", "1", "--lambda", "-0.1", "--mu", "1", "--t-end", "200", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let traj = read(&dir.path().join("trajectory.csv"));
    assert_eq!(traj.lines().next(), Some("t,r_1,rdot_1,dissipation_1,phase,linf"));
    // 200 / 1e-3 steps, recorded every 100.
    assert_eq!(traj.lines().count(), 2002);
    let summary = read(&dir.path().join(SUMMARY_FILE));
    let get = |k: &str| -> f64 {
        summary.lines().find_map(|l| l.strip_prefix(&format!("{k},"))).unwrap().parse().unwrap()
    };
    assert!((get("r_1_final") - 5f64.sqrt()).abs() < 1e-4);
    assert!((get("predicted_r_star") - 5f64.sqrt()).abs() < 1e-12);
    assert!(get("first_integral_residual") < 1e-5);
}

#[test]
fn verify_rejects_a_directory_without_runs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(verify(dir.path()).is_err());
    let out = bin().args(["verify"]).arg(dir.path()).output().unwrap();
    assert!(!out.status.success());
}
