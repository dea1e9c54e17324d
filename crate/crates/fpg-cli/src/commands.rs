//! Implementations of the four subcommands. Each returns the process exit
//! code on success; `Err(String)` means a usage/config failure (exit 1).

use std::fs;
use std::path::{Path, PathBuf};

use fpg_core::bench::csvio::{
    metrics_csv_string, write_kernel_csv, write_plot_csv, write_suite_csv, write_sweep_csv,
};
use fpg_core::bench::{alpha_sweep, episodes_to_threshold, final_window_return, run_suite, SuiteConfig};
use fpg_core::envs::EnvKind;
use fpg_core::frac_td::all_variant_pairs;
use fpg_core::frac_td::kernel_fidelity_report;
use fpg_core::trainer::{train, Algo, TrainConfig};

use crate::config::{load_config, manifest_text};

/// Per-step timing of the recursive kernel must stay flat: mean cost over
/// the last decile of a run may exceed the first decile's by at most this
/// factor.
const TIMING_RATIO_LIMIT: f64 = 1.2;
/// Horizons shorter than this cannot support the second-half log-log fit the
/// report is built on.
const MIN_KERNEL_STEPS: usize = 100;

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .map_err(|e| format!("cannot create '{}': {e}", parent.display()))?;
    }
    fs::write(path, contents).map_err(|e| format!("cannot write '{}': {e}", path.display()))
}

pub fn cmd_kernel_check(
    out_dir: &Path,
    alpha: f64,
    steps: usize,
    seeds: usize,
    out: Option<PathBuf>,
) -> Result<i32, String> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(format!("alpha must be in (0, 1), got {alpha}"));
    }
    if seeds == 0 {
        return Err("seeds must be >= 1".into());
    }
    if steps < MIN_KERNEL_STEPS {
        eprintln!(
            "warning: {steps} steps is below the {MIN_KERNEL_STEPS}-step minimum for \
             fidelity statistics; nothing to do"
        );
        return Ok(0);
    }
    let report = kernel_fidelity_report(alpha, steps, seeds, &all_variant_pairs())
        .map_err(|e| e.to_string())?;

    let path = out_dir.join(out.unwrap_or_else(|| PathBuf::from("kernel_report.csv")));
    let mut buf = Vec::new();
    write_kernel_csv(&mut buf, &report).map_err(|e| e.to_string())?;
    write_file(&path, &String::from_utf8(buf).expect("csv is utf-8"))?;

    println!("kernel check: alpha = {alpha}, horizon = {steps}, seeds = {seeds}");
    for v in &report.variants {
        println!(
            "  {}/{}: error slope {:.3} (r² {:.3}), clip events {}, bound violations {}",
            v.mu_variant, v.eta_variant, v.error_slope, v.slope_r2, v.clip_events_total,
            v.bound_violations
        );
    }
    let rec_ratio = report.recursive_timing.decile_ratio();
    let naive_ratio = report.naive_timing.decile_ratio();
    println!(
        "  timing: recursive last/first decile {:.3} (limit {}), naive {:.2} for comparison",
        rec_ratio, TIMING_RATIO_LIMIT, naive_ratio
    );
    println!("  report written to {}", path.display());

    let flat_time = rec_ratio <= TIMING_RATIO_LIMIT;
    let bounds_held = report.variants.iter().all(|v| v.bound_violations == 0);
    println!("  constant-time invariant: {}", if flat_time { "PASS" } else { "FAIL" });
    println!("  clip-bound invariant:    {}", if bounds_held { "PASS" } else { "FAIL" });
    Ok(if flat_time && bounds_held { 0 } else { 3 })
}

pub fn cmd_train(
    out_dir: &Path,
    config_path: &Path,
    seed: Option<u64>,
    episodes: Option<usize>,
) -> Result<i32, String> {
    let mut parsed = load_config(config_path)?;
    if let Some((_, version)) = parsed.manifest.iter().find(|(k, _)| k == "tool_version") {
        println!("re-running from a manifest (written by version {version})");
    }
    if let Some(seed) = seed {
        parsed.config.seed = seed;
    }
    if let Some(episodes) = episodes {
        parsed.config.max_episodes = episodes;
    }
    let config = parsed.config;
    config.validate().map_err(|e| e.to_string())?;

    let run = train(&config).map_err(|e| e.to_string())?;

    write_file(&out_dir.join("metrics.csv"), &metrics_csv_string(&config, &run.metrics))?;
    write_file(&out_dir.join("policy.txt"), &run.policy.to_checkpoint())?;
    write_file(&out_dir.join("value.txt"), &run.value.to_checkpoint())?;
    let manifest = manifest_text(
        &config,
        "train",
        &[
            ("metrics_csv", "metrics.csv"),
            ("policy_checkpoint", "policy.txt"),
            ("value_checkpoint", "value.txt"),
        ],
    );
    write_file(&out_dir.join("manifest.txt"), &manifest)?;

    let returns: Vec<f64> = run.metrics.iter().map(|m| m.ret).collect();
    let threshold = fpg_core::envs::Env::new(config.env).spec().solved_threshold;
    println!("run: {} / {} / seed {}", config.env, config.algo, config.seed);
    println!(
        "episodes: {}  final-window return: {:.2}  episodes-to-threshold ({}): {}",
        run.metrics.len(),
        final_window_return(&run.metrics),
        threshold,
        episodes_to_threshold(&returns, threshold)
            .map(|e| e.to_string())
            .unwrap_or_else(|| "never".into()),
    );
    println!("artifacts in {}", out_dir.display());

    if let Some(diag) = &run.abort {
        eprintln!("numerical abort: {diag} (parameters rolled back to the last finite episode)");
        return Ok(2);
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_bench(
    out_dir: &Path,
    env: EnvKind,
    algos: &str,
    seeds: usize,
    episodes: Option<usize>,
    config_path: Option<&Path>,
    ablations: bool,
    baseline: Algo,
    workers: usize,
) -> Result<i32, String> {
    let algos = parse_algo_list(algos)?;
    let mut base = match config_path {
        Some(path) => load_config(path)?.config,
        None => TrainConfig::defaults_for(env, Algo::Fpg, 0),
    };
    if let Some(episodes) = episodes {
        base.max_episodes = episodes;
    }
    let mut suite = SuiteConfig::new(env, algos, seeds);
    suite.base = base;
    suite.base.env = env;
    suite.ablations = ablations;
    suite.baseline = baseline;
    suite.workers = workers;

    let result = run_suite(&suite).map_err(|e| e.to_string())?;

    for cell in &result.cells {
        for (seed, rows) in &cell.tables {
            let mut config = cell.config;
            config.seed = *seed;
            let path = out_dir.join("runs").join(&cell.label).join(format!("seed_{seed}.csv"));
            write_file(&path, &metrics_csv_string(&config, rows))?;
        }
    }
    let mut buf = Vec::new();
    write_suite_csv(&mut buf, &result).map_err(|e| e.to_string())?;
    write_file(&out_dir.join("suite_summary.csv"), &String::from_utf8(buf).expect("utf-8"))?;
    let mut buf = Vec::new();
    write_plot_csv(&mut buf, &result).map_err(|e| e.to_string())?;
    write_file(&out_dir.join("plot_data.csv"), &String::from_utf8(buf).expect("utf-8"))?;
    write_file(
        &out_dir.join("manifest.txt"),
        &manifest_text(&suite.base, "bench", &[("metrics_csv", "suite_summary.csv")]),
    )?;

    for (label, seed, err) in &result.failures {
        eprintln!("cell {label} seed {seed} failed: {err}");
    }
    println!(
        "suite: {} / {} seeds / cells: {}",
        env,
        seeds,
        result
            .summaries
            .iter()
            .map(|s| s.label.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    );
    for s in &result.summaries {
        let median = s
            .median_episodes_to_threshold
            .map(|m| m.to_string())
            .unwrap_or_else(|| "never".into());
        let welch = result
            .welch_for(&s.label)
            .map(|w| format!("  p_less(grad var vs {}) = {:.4}", w.baseline, w.p_less))
            .unwrap_or_default();
        println!(
            "  {:<18} median-episodes-to-threshold {:<6} final return {:.1} ± {:.1}{}",
            s.label, median, s.mean_final_return, s.ci95_final_return, welch
        );
    }
    println!("artifacts in {}", out_dir.display());
    Ok(0)
}

pub fn cmd_sweep(
    out_dir: &Path,
    env: EnvKind,
    alpha_grid: &str,
    seeds: usize,
    episodes: Option<usize>,
    config_path: Option<&Path>,
    workers: usize,
) -> Result<i32, String> {
    let alphas = parse_alpha_grid(alpha_grid)?;
    let mut base = match config_path {
        Some(path) => load_config(path)?.config,
        None => TrainConfig::defaults_for(env, Algo::Fpg, 0),
    };
    if let Some(episodes) = episodes {
        base.max_episodes = episodes;
    }
    base.env = env;
    base.algo = Algo::Fpg;
    let rows = alpha_sweep(env, &alphas, seeds, &base, workers).map_err(|e| e.to_string())?;

    let mut text = format!("# env = {env}\n# seeds = {seeds}\n");
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows).map_err(|e| e.to_string())?;
    text.push_str(&String::from_utf8(buf).expect("utf-8"));
    let path = out_dir.join("sweep.csv");
    write_file(&path, &text)?;

    println!("alpha sweep on {env}, {seeds} seeds:");
    for row in &rows {
        println!(
            "  alpha {:<5} median-episodes-to-threshold {:<6} final return {:.1} ± {:.1}",
            row.alpha,
            row.median_episodes_to_threshold
                .map(|m| m.to_string())
                .unwrap_or_else(|| "never".into()),
            row.mean_final_return,
            row.ci95_final_return
        );
    }
    println!("table written to {}", path.display());
    Ok(0)
}

fn parse_algo_list(list: &str) -> Result<Vec<Algo>, String> {
    let mut algos = Vec::new();
    for part in list.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        algos.push(part.parse::<Algo>().map_err(|e| e.to_string())?);
    }
    if algos.is_empty() {
        return Err("no algorithms listed".into());
    }
    Ok(algos)
}

/// Parse `start:end:step` into an inclusive grid.
fn parse_alpha_grid(grid: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("alpha grid must be start:end:step, got '{grid}'"));
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number '{s}' in alpha grid"))
    };
    let (start, end, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if step.is_nan() || step <= 0.0 {
        return Err(format!("alpha grid step must be positive, got {step}"));
    }
    if end < start {
        return Err(format!("alpha grid end {end} is below start {start}"));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    let alphas: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
    for &alpha in &alphas {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(format!("alpha {alpha} outside (0, 1)"));
        }
    }
    Ok(alphas)
}
