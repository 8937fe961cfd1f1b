//! The `taillab` binary: subcommands, exit codes, artifacts, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_taillab");

fn taillab(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).current_dir(dir).env_remove("TAILLAB_THREADS").output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    fs::write(dir.join(name), body).unwrap();
    name.to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SIM: &str = "\
output_dir = out/{name}

[potential]
m = 3
x_plus = 2
x_minus = -2

[initial_data]
kind = {kind}
center = 1
width = 0.5
which = psi1

[pipeline]
stages = {stages}

[numeric]
t_final = 240
h = 0.05
record_every = 4
fit_window = 60, 240
amplitude_window = 120, 240
";

fn sim(name: &str, kind: &str, stages: &str) -> String {
    SIM.replace("{name}", name).replace("{kind}", kind).replace("{stages}", stages)
}

#[test]
fn selfcheck_passes_quickly() {
    let dir = tempfile::tempdir().unwrap();
    let o = taillab(dir.path(), &["selfcheck"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("5 checks, 0 failed"), "{out}");
    let secs: f64 = out.rsplit(", ").next().unwrap().trim().trim_end_matches(" s").parse().unwrap();
    assert!(secs < 60.0);
}

#[test]
fn empty_pipeline_is_a_validation_error_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.ini", &sim("empty", "gaussian", ""));
    let o = taillab(dir.path(), &["run", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty"), "{}", stderr(&o));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn malformed_configs_and_thread_caps_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.ini", &sim("bad", "gaussian", "simulate").replace("h = 0.05", "h = 0.05\nspeed = 3"));
    let o = taillab(dir.path(), &["run", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("speed"));
    assert_eq!(taillab(dir.path(), &["run", "missing.ini"]).status.code(), Some(2));
    let good = write(dir.path(), "good.ini", &sim("good", "gaussian", "simulate"));
    let o = Command::new(BIN).args(["run", &good]).current_dir(dir.path()).env("TAILLAB_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("TAILLAB_THREADS"));
}

#[test]
fn deep_well_aborts_with_a_bound_state_report() {
    let dir = tempfile::tempdir().unwrap();
    let body = sim("well", "bump", "spectral, simulate, decay").replace("x_minus = -2", "x_minus = -2\ndepth = -5");
    let cfg = write(dir.path(), "well.ini", &body);
    let o = taillab(dir.path(), &["run", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let err = stderr(&o);
    assert!(err.contains("bound state") && err.contains("no bound states") && err.contains("zero-energy resonance"), "{err}");
    let out = dir.path().join("out/well");
    let spectral = fs::read_to_string(out.join("spectral.txt")).unwrap();
    assert!(spectral.contains("status = bound_state"));
    assert!(!out.join("timeseries.csv").exists());
    assert!(fs::read_to_string(out.join("run_record.txt")).unwrap().contains("status = exit 3"));
}

#[test]
fn decay_subcommand_is_deterministic_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.ini", &sim("a", "random", "simulate, decay").replace("kind = random", "kind = random\nseed = 5"));
    let b = write(dir.path(), "b.ini", &sim("b", "random", "simulate, decay").replace("kind = random", "kind = random\nseed = 5"));
    for cfg in [&a, &b] {
        let o = taillab(dir.path(), &["decay", cfg]);
        assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("exponent ≈ 3"), "{}", stdout(&o));
    }
    let (pa, pb) = (dir.path().join("out/a"), dir.path().join("out/b"));
    for f in ["timeseries.csv", "decay_report.csv", "local_exponent.csv", "jost_plus.csv", "jost_minus.csv"] {
        let x = fs::read(pa.join(f)).unwrap();
        assert!(x.starts_with(b"# schema=1\n"), "{f}");
        assert_eq!(x, fs::read(pb.join(f)).unwrap(), "{f} differs between identical runs");
    }
    let record = fs::read_to_string(pa.join("run_record.txt")).unwrap();
    assert!(record.contains(&format!("taillab_version = {}", env!("CARGO_PKG_VERSION"))));
    assert!(record.contains("command = decay") && record.contains("seed = 5") && record.contains("stages = spectral, simulate, decay"));
    let report = fs::read_to_string(pa.join("decay_report.txt")).unwrap();
    assert!(report.contains("exponent = ") && report.contains("window_lo = 6e1"));
    let mut rows = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(pa.join("decay_report.csv")).unwrap();
    let row = rows.records().next().unwrap().unwrap();
    let exponent: f64 = row[1].parse().unwrap();
    assert!((exponent - 3.0).abs() < 0.2, "{exponent}");
}

#[test]
fn spectral_subcommand_exports_jost_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.ini", &sim("s", "gaussian", "simulate"));
    let o = taillab(dir.path(), &["spectral", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out/s");
    assert!(!out.join("timeseries.csv").exists());
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(out.join("jost_plus.csv")).unwrap();
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["x", "re_y", "im_y", "re_s", "im_s", "residual"]);
    // interior residuals of y'' = (V+ε²)y are small
    let res: Vec<f64> = r.records().map(|x| x.unwrap()[5].parse().unwrap()).collect();
    let interior = &res[5..res.len() - 5];
    assert!(interior.iter().all(|&v| v < 1e-5), "{:?}", interior.iter().cloned().fold(0.0, f64::max));
}

#[test]
fn full_pipeline_reports_the_exponent_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let body = sim("all", "gaussian", "all").replace("h = 0.05", "h = 0.05\nseries_x = 20\nseries_eps = 0.02\nilt_times = 5");
    let cfg = write(dir.path(), "all.ini", &body);
    let o = Command::new(BIN).args(["run", &cfg]).current_dir(dir.path()).env("TAILLAB_THREADS", "2").output().unwrap();
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}{}", stderr(&o));
    assert!(out.contains("exponent ≈ 3"), "{out}");
    let root = dir.path().join("out/all");
    for f in ["spectral.txt", "series.txt", "series_fj.csv", "ilt.csv", "timeseries.csv", "decay_report.txt", "summary.txt", "run_record.txt"] {
        assert!(root.join(f).exists(), "{f} missing");
    }
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(root.join("ilt.csv")).unwrap();
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["t", "psi", "predicted_tail", "ratio"]);
    let row = r.records().next().unwrap().unwrap();
    let psi: f64 = row[1].parse().unwrap();
    // leapfrog value at t = 5 for this data (h = 0.05 run)
    assert!((psi - 0.2212).abs() < 1e-3, "{psi}");
    let line = out.lines().find(|l| l.starts_with("ilt vs leapfrog")).unwrap();
    let rel: f64 = line.split('=').nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(rel < 1e-3, "{line}");
}
