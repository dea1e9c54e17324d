//! End-to-end tests of the `fpg` binary: exit codes, artifact layout, and
//! manifest-driven reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fpg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpg"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL_CFG: &str = "\
[train]
env = cartpole
algo = fpg
seed = 11
max_episodes = 8
hidden = 8
minibatch = 8
";

/// Strip the wall-clock column (the one legitimately nondeterministic field)
/// from a metrics CSV.
fn mask_wall_ms(text: &str) -> String {
    text.lines()
        .map(|line| {
            if line.starts_with('#') || line.starts_with("episode,") {
                line.to_string()
            } else {
                let (rest, _) = line.rsplit_once(',').unwrap();
                format!("{rest},*")
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn unknown_flag_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = fpg(dir.path(), &["train", "--nonsense"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&fpg(dir.path(), &["--help"])), 0);
    assert_eq!(code(&fpg(dir.path(), &["train", "--help"])), 0);
}

#[test]
fn bad_config_key_exits_1_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.ini",
        "[train]\nenv = cartpole\nalgo = fpg\nlearning_rate = 1\n",
    );
    let out = fpg(dir.path(), &["train", "--config", &cfg]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("line 4"), "{err}");
    assert!(err.contains("learning_rate"), "{err}");
}

#[test]
fn train_writes_artifacts_and_manifest_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.ini", SMALL_CFG);
    let out = fpg(dir.path(), &["train", "--config", &cfg, "--out", "first"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for artifact in ["metrics.csv", "manifest.txt", "policy.txt", "value.txt"] {
        assert!(dir.path().join("first").join(artifact).is_file(), "missing {artifact}");
    }

    let manifest = dir.path().join("first/manifest.txt");
    let out = fpg(
        dir.path(),
        &["train", "--config", manifest.to_str().unwrap(), "--out", "second"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let a = fs::read_to_string(dir.path().join("first/metrics.csv")).unwrap();
    let b = fs::read_to_string(dir.path().join("second/metrics.csv")).unwrap();
    assert_eq!(mask_wall_ms(&a), mask_wall_ms(&b));

    // Same config, fresh process: bit-identical apart from wall time.
    let out = fpg(dir.path(), &["train", "--config", &cfg, "--out", "third"]);
    assert_eq!(code(&out), 0);
    let c = fs::read_to_string(dir.path().join("third/metrics.csv")).unwrap();
    assert_eq!(mask_wall_ms(&a), mask_wall_ms(&c));
}

#[test]
fn seed_override_changes_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.ini", SMALL_CFG);
    assert_eq!(code(&fpg(dir.path(), &["train", "--config", &cfg, "--out", "a"])), 0);
    assert_eq!(
        code(&fpg(dir.path(), &["train", "--config", &cfg, "--seed", "99", "--out", "b"])),
        0
    );
    let a = fs::read_to_string(dir.path().join("a/metrics.csv")).unwrap();
    let b = fs::read_to_string(dir.path().join("b/metrics.csv")).unwrap();
    assert_ne!(mask_wall_ms(&a), mask_wall_ms(&b));
    assert!(b.contains("# seed = 99"));
}

#[test]
fn numerical_abort_exits_2_with_last_good_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "explode.ini",
        "[train]\nenv = cartpole\nalgo = fpg\nseed = 3\nmax_episodes = 40\nhidden = 8\nbeta_v = 1e12\n",
    );
    let out = fpg(dir.path(), &["train", "--config", &cfg, "--out", "boom"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("numerical abort"));
    let policy = fs::read_to_string(dir.path().join("boom/policy.txt")).unwrap();
    assert!(policy.starts_with("policy,"));
    assert!(!policy.contains("NaN"), "checkpoint must hold the rolled-back finite parameters");
}

#[test]
fn kernel_check_short_horizon_warns_and_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = fpg(dir.path(), &["kernel-check", "--steps", "10"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("warning"));
    assert!(!dir.path().join("kernel_report.csv").exists());
}

#[test]
fn kernel_check_bad_alpha_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = fpg(dir.path(), &["kernel-check", "--alpha", "1.5"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("alpha"));
}

#[test]
fn kernel_check_writes_report_and_passes_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let out = fpg(
        dir.path(),
        &["kernel-check", "--alpha", "0.5", "--steps", "200", "--seeds", "2"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = fs::read_to_string(dir.path().join("kernel_report.csv")).unwrap();
    let rows = report
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("mu_variant,"))
        .count();
    assert_eq!(rows, 6 * 200); // six variant pairs × horizon
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(stdout.contains("constant-time invariant: PASS"), "{stdout}");
    assert!(stdout.contains("clip-bound invariant:    PASS"), "{stdout}");
}

#[test]
fn bench_writes_suite_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = fpg(
        dir.path(),
        &[
            "bench",
            "--env",
            "cartpole",
            "--algos",
            "fpg,a2c",
            "--seeds",
            "2",
            "--episodes",
            "6",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for artifact in [
        "suite/suite_summary.csv",
        "suite/plot_data.csv",
        "suite/manifest.txt",
        "suite/runs/fpg/seed_0.csv",
        "suite/runs/fpg/seed_1.csv",
        "suite/runs/a2c/seed_0.csv",
        "suite/runs/a2c/seed_1.csv",
    ] {
        assert!(dir.path().join(artifact).is_file(), "missing {artifact}");
    }
    let summary = fs::read_to_string(dir.path().join("suite/suite_summary.csv")).unwrap();
    assert!(summary.contains("fpg,fpg,2,"));
    assert!(summary.contains("a2c,a2c,2,"));
}

#[test]
fn bench_single_seed_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = fpg(
        dir.path(),
        &["bench", "--env", "cartpole", "--algos", "fpg,a2c", "--seeds", "1", "--episodes", "4"],
    );
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("2 seeds"), "{}", stderr(&out));
}

#[test]
fn sweep_writes_one_row_per_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let out = fpg(
        dir.path(),
        &[
            "sweep",
            "--env",
            "cartpole",
            "--alpha",
            "0.6:0.7:0.05",
            "--seeds",
            "2",
            "--episodes",
            "5",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = fs::read_to_string(dir.path().join("sweep/sweep.csv")).unwrap();
    let rows: Vec<&str> =
        table.lines().filter(|l| !l.starts_with('#') && !l.starts_with("alpha,")).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("0.6,"));
    assert!(rows[2].starts_with("0.7,"));
}

#[test]
fn out_root_env_var_redirects_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("redirected");
    let cfg = write_config(dir.path(), "run.ini", SMALL_CFG);
    let out = Command::new(env!("CARGO_BIN_EXE_fpg"))
        .current_dir(dir.path())
        .env("FPG_OUT_ROOT", &root)
        .args(["train", "--config", &cfg, "--out", "r"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(root.join("r/metrics.csv").is_file());
}
