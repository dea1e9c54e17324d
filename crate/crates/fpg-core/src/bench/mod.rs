//! Benchmark harness: cross-product suite runner, variance/efficiency
//! comparisons between algorithms, and the statistics behind them.

pub mod stats;

/// One per-episode metrics row emitted by a training run.
///
/// `grad_var_window` is the mean over the trailing ≤20 episodes of the
/// within-episode population variance of per-step policy-gradient norms.
/// `max_abs_frac_delta` is the episode's largest |scalar weight| applied to
/// the score (the fractional TD error for the main algorithm, the plain TD
/// error / return / advantage for the baselines).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    /// 1-based episode index.
    pub episode: usize,
    pub steps: usize,
    pub ret: f64,
    pub grad_var_window: f64,
    pub max_abs_frac_delta: f64,
    pub clip_events: u64,
    pub wall_ms: f64,
}

pub mod csvio;

use crate::envs::{Env, EnvKind};
use crate::error::{Error, Result};
use crate::par::map_items;
use crate::trainer::{train, Ablations, Algo, TrainConfig};
use stats::{ci95_half, mean_var, median_episodes, welch_t, WelchTest};

/// Trailing window (episodes) for the solved test and the final-return
/// statistic.
pub const THRESHOLD_WINDOW: usize = 10;

/// First 1-based episode index at which the trailing
/// [`THRESHOLD_WINDOW`]-episode mean return reaches `threshold`; `None` if
/// training never gets there (or has fewer episodes than one window).
pub fn episodes_to_threshold(returns: &[f64], threshold: f64) -> Option<usize> {
    if returns.len() < THRESHOLD_WINDOW {
        return None;
    }
    let mut window_sum: f64 = returns[..THRESHOLD_WINDOW].iter().sum();
    let target = threshold * THRESHOLD_WINDOW as f64;
    if window_sum >= target {
        return Some(THRESHOLD_WINDOW);
    }
    for i in THRESHOLD_WINDOW..returns.len() {
        window_sum += returns[i] - returns[i - THRESHOLD_WINDOW];
        if window_sum >= target {
            return Some(i + 1);
        }
    }
    None
}

/// Bias/variance decomposition of gradient estimates against a reference
/// direction: bias² = ‖mean(samples) − reference‖², variance =
/// mean‖sample − mean‖². The reference is typically a high-sample-count
/// Monte Carlo gradient at the same parameters.
pub fn bias_variance_estimate(samples: &[Vec<f64>], reference: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "bias/variance needs >= 2 gradient samples, got {}",
            samples.len()
        )));
    }
    let dim = reference.len();
    if samples.iter().any(|s| s.len() != dim) {
        return Err(Error::Dimension(format!(
            "gradient samples must all have the reference's dimension {dim}"
        )));
    }
    let n = samples.len() as f64;
    let mut mean = vec![0.0; dim];
    for s in samples {
        for (m, v) in mean.iter_mut().zip(s) {
            *m += v / n;
        }
    }
    let bias_sq: f64 = mean.iter().zip(reference).map(|(m, r)| (m - r) * (m - r)).sum();
    let mut variance = 0.0;
    for s in samples {
        variance += s.iter().zip(&mean).map(|(v, m)| (v - m) * (v - m)).sum::<f64>() / n;
    }
    Ok((bias_sq, variance))
}

/// Mean of `grad_var_window` over the final third of a run's episodes (the
/// per-seed scalar fed to the variance-reduction significance test).
pub fn final_third_grad_var(table: &[MetricsRecord]) -> f64 {
    if table.is_empty() {
        return f64::NAN;
    }
    let start = table.len() - table.len().div_ceil(3);
    let tail = &table[start..];
    tail.iter().map(|m| m.grad_var_window).sum::<f64>() / tail.len() as f64
}

/// Mean return over the trailing [`THRESHOLD_WINDOW`] episodes (all episodes
/// when the run is shorter).
pub fn final_window_return(table: &[MetricsRecord]) -> f64 {
    if table.is_empty() {
        return f64::NAN;
    }
    let start = table.len().saturating_sub(THRESHOLD_WINDOW);
    let tail = &table[start..];
    tail.iter().map(|m| m.ret).sum::<f64>() / tail.len() as f64
}

/// One suite cell: a labelled training configuration run across seeds.
#[derive(Debug, Clone)]
pub struct CellSpec {
    pub label: String,
    pub config: TrainConfig,
}

/// Completed tables for one cell, keyed by master seed.
#[derive(Debug, Clone)]
pub struct CellTables {
    pub label: String,
    pub config: TrainConfig,
    pub tables: Vec<(u64, Vec<MetricsRecord>)>,
}

/// Per-cell aggregate statistics.
#[derive(Debug, Clone)]
pub struct CellSummary {
    pub label: String,
    pub algo: Algo,
    pub seeds_completed: usize,
    /// Per completed seed, in seed order.
    pub episodes_to_threshold: Vec<Option<usize>>,
    /// Lower median; `None` when the median seed never reaches threshold.
    pub median_episodes_to_threshold: Option<usize>,
    pub mean_final_return: f64,
    pub ci95_final_return: f64,
    /// Per-seed final-third windowed gradient variance.
    pub final_grad_var_per_seed: Vec<f64>,
    pub mean_final_grad_var: f64,
    pub ci95_final_grad_var: f64,
    pub mean_clip_events: f64,
}

/// Significance test of one cell against the baseline cell on per-seed
/// final-third gradient variance.
#[derive(Debug, Clone)]
pub struct WelchRow {
    pub label: String,
    pub baseline: String,
    pub test: WelchTest,
    /// One-sided p for "cell's variance is lower than the baseline's".
    pub p_less: f64,
}

/// Aggregated output of a suite: everything here is a pure function of the
/// per-run metric tables (equivalently: of the per-run CSV files).
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub env: EnvKind,
    pub threshold: f64,
    pub seeds_requested: usize,
    pub cells: Vec<CellTables>,
    pub summaries: Vec<CellSummary>,
    pub baseline_label: Option<String>,
    pub welch: Vec<WelchRow>,
    /// Per non-baseline cell: (episode, mean grad_var ratio vs baseline) at
    /// matched episode indices.
    pub variance_ratio: Vec<(String, Vec<(usize, f64)>)>,
    /// Cells×seeds that failed to run, with the error rendered as text
    /// (execution metadata; not part of the aggregation proper).
    pub failures: Vec<(String, u64, String)>,
}

impl SuiteResult {
    pub fn summary(&self, label: &str) -> Option<&CellSummary> {
        self.summaries.iter().find(|s| s.label == label)
    }

    pub fn welch_for(&self, label: &str) -> Option<&WelchRow> {
        self.welch.iter().find(|w| w.label == label)
    }
}

/// Suite request: which algorithms (plus optional ablation cells) to run on
/// one environment, across how many seeds.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub env: EnvKind,
    pub algos: Vec<Algo>,
    pub seeds: usize,
    /// Template config; `env`, `algo`, `seed`, and ablation flags are
    /// overwritten per cell.
    pub base: TrainConfig,
    /// Add one FPG cell per ablation switch.
    pub ablations: bool,
    /// Comparator for variance ratios and significance tests.
    pub baseline: Algo,
    /// Worker-pool size; 0 = backend default. Results are identical for any
    /// value.
    pub workers: usize,
}

impl SuiteConfig {
    pub fn new(env: EnvKind, algos: Vec<Algo>, seeds: usize) -> Self {
        SuiteConfig {
            env,
            algos,
            seeds,
            base: TrainConfig::defaults_for(env, Algo::Fpg, 0),
            ablations: false,
            baseline: Algo::A2c,
            workers: 0,
        }
    }

    /// The labelled cells this request expands to.
    pub fn cells(&self) -> Vec<CellSpec> {
        let mut specs = Vec::new();
        for &algo in &self.algos {
            let mut config = self.base;
            config.env = self.env;
            config.algo = algo;
            config.ablations = Ablations::default();
            specs.push(CellSpec { label: algo.as_str().to_string(), config });
        }
        if self.ablations {
            for (label, ablations) in [
                ("fpg_clipping_off", Ablations { clipping_off: true, ..Default::default() }),
                ("fpg_recursion_off", Ablations { recursion_off: true, ..Default::default() }),
                ("fpg_minibatch_off", Ablations { minibatch_off: true, ..Default::default() }),
            ] {
                let mut config = self.base;
                config.env = self.env;
                config.algo = Algo::Fpg;
                config.ablations = ablations;
                specs.push(CellSpec { label: label.to_string(), config });
            }
        }
        specs
    }
}

/// Execute every (cell, seed) run concurrently and aggregate. Seed `i` of
/// every cell uses master seed `base.seed + i`, so cells are paired by seed.
/// Individual run failures are isolated: the cell's statistics use the
/// completed seeds and the failure is reported in `failures`.
pub fn run_suite(suite: &SuiteConfig) -> Result<SuiteResult> {
    if suite.seeds < 2 {
        return Err(Error::InsufficientData(format!(
            "suite statistics need >= 2 seeds, got {}",
            suite.seeds
        )));
    }
    let specs = suite.cells();
    if specs.is_empty() {
        return Err(Error::Config("suite has no cells (no algorithms listed)".into()));
    }
    let mut jobs: Vec<(usize, TrainConfig)> = Vec::with_capacity(specs.len() * suite.seeds);
    for (ci, spec) in specs.iter().enumerate() {
        for i in 0..suite.seeds {
            let mut config = spec.config;
            config.seed = suite.base.seed + i as u64;
            jobs.push((ci, config));
        }
    }
    let outcomes = map_items(jobs, suite.workers, |(ci, config)| {
        let res = train(&config).map(|run| run.metrics);
        (ci, config.seed, res)
    });

    let mut cells: Vec<CellTables> = specs
        .iter()
        .map(|s| CellTables { label: s.label.clone(), config: s.config, tables: Vec::new() })
        .collect();
    let mut failures = Vec::new();
    for (ci, seed, res) in outcomes {
        match res {
            Ok(table) => cells[ci].tables.push((seed, table)),
            Err(e) => failures.push((specs[ci].label.clone(), seed, e.to_string())),
        }
    }
    let baseline_label = specs
        .iter()
        .any(|s| s.label == suite.baseline.as_str())
        .then(|| suite.baseline.as_str().to_string());
    let mut result =
        aggregate_suite(suite.env, suite.seeds, cells, baseline_label.as_deref())?;
    result.failures = failures;
    Ok(result)
}

/// Pure aggregation: per-cell summaries, paired Welch tests, and variance
/// ratios from completed metric tables. Re-running this on tables parsed
/// back from the per-run CSVs reproduces the same numbers bit for bit.
pub fn aggregate_suite(
    env: EnvKind,
    seeds_requested: usize,
    cells: Vec<CellTables>,
    baseline_label: Option<&str>,
) -> Result<SuiteResult> {
    let threshold = Env::new(env).spec().solved_threshold;
    let mut summaries = Vec::with_capacity(cells.len());
    for cell in &cells {
        let e2t: Vec<Option<usize>> = cell
            .tables
            .iter()
            .map(|(_, t)| {
                let returns: Vec<f64> = t.iter().map(|m| m.ret).collect();
                episodes_to_threshold(&returns, threshold)
            })
            .collect();
        let finals: Vec<f64> = cell.tables.iter().map(|(_, t)| final_window_return(t)).collect();
        let grad_vars: Vec<f64> = cell.tables.iter().map(|(_, t)| final_third_grad_var(t)).collect();
        let clip_means: Vec<f64> = cell
            .tables
            .iter()
            .map(|(_, t)| {
                if t.is_empty() {
                    0.0
                } else {
                    t.iter().map(|m| m.clip_events as f64).sum::<f64>() / t.len() as f64
                }
            })
            .collect();
        let (mean_ret, var_ret) = mean_var(&finals);
        let (mean_gv, var_gv) = mean_var(&grad_vars);
        let (mean_clip, _) = mean_var(&clip_means);
        summaries.push(CellSummary {
            label: cell.label.clone(),
            algo: cell.config.algo,
            seeds_completed: cell.tables.len(),
            median_episodes_to_threshold: median_episodes(&e2t),
            episodes_to_threshold: e2t,
            mean_final_return: mean_ret,
            ci95_final_return: ci95_half(var_ret.sqrt(), finals.len()),
            final_grad_var_per_seed: grad_vars,
            mean_final_grad_var: mean_gv,
            ci95_final_grad_var: ci95_half(var_gv.sqrt(), cell.tables.len()),
            mean_clip_events: mean_clip,
        });
    }

    let mut welch = Vec::new();
    let mut variance_ratio = Vec::new();
    if let Some(base_label) = baseline_label {
        let bi = cells
            .iter()
            .position(|c| c.label == base_label)
            .ok_or_else(|| Error::Config(format!("baseline cell '{base_label}' not in suite")))?;
        let base_gv = &summaries[bi].final_grad_var_per_seed;
        for (ci, cell) in cells.iter().enumerate() {
            if ci == bi {
                continue;
            }
            let gv = &summaries[ci].final_grad_var_per_seed;
            if gv.len() >= 2 && base_gv.len() >= 2 {
                if let Ok(test) = welch_t(gv, base_gv) {
                    let p_less = test.p_less();
                    welch.push(WelchRow {
                        label: cell.label.clone(),
                        baseline: base_label.to_string(),
                        test,
                        p_less,
                    });
                }
            }
            variance_ratio
                .push((cell.label.clone(), ratio_series(&cell.tables, &cells[bi].tables)));
        }
    }

    Ok(SuiteResult {
        env,
        threshold,
        seeds_requested,
        baseline_label: baseline_label.map(str::to_string),
        cells,
        summaries,
        welch,
        variance_ratio,
        failures: Vec::new(),
    })
}

/// Mean windowed gradient variance of `cell` over seeds, divided by the
/// baseline's, at every episode index both cells fully cover.
fn ratio_series(
    cell: &[(u64, Vec<MetricsRecord>)],
    base: &[(u64, Vec<MetricsRecord>)],
) -> Vec<(usize, f64)> {
    let common = cell
        .iter()
        .chain(base)
        .map(|(_, t)| t.len())
        .min()
        .unwrap_or(0);
    let mut series = Vec::with_capacity(common);
    for e in 0..common {
        let mean_at = |tables: &[(u64, Vec<MetricsRecord>)]| {
            tables.iter().map(|(_, t)| t[e].grad_var_window).sum::<f64>() / tables.len() as f64
        };
        let num = mean_at(cell);
        let den = mean_at(base);
        if den > 0.0 && num.is_finite() {
            series.push((e + 1, num / den));
        }
    }
    series
}

/// One row of an α-sweep table.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub alpha: f64,
    pub seeds_completed: usize,
    pub median_episodes_to_threshold: Option<usize>,
    pub mean_final_return: f64,
    pub ci95_final_return: f64,
    pub mean_final_grad_var: f64,
}

/// Run the main algorithm at each α across seeds; one summary row per α.
pub fn alpha_sweep(
    env: EnvKind,
    alphas: &[f64],
    seeds: usize,
    base: &TrainConfig,
    workers: usize,
) -> Result<Vec<SweepRow>> {
    if seeds < 2 {
        return Err(Error::InsufficientData(format!(
            "sweep statistics need >= 2 seeds, got {seeds}"
        )));
    }
    if alphas.is_empty() {
        return Err(Error::Config("alpha sweep needs at least one alpha".into()));
    }
    let mut jobs = Vec::with_capacity(alphas.len() * seeds);
    for (ai, &alpha) in alphas.iter().enumerate() {
        for i in 0..seeds {
            let mut config = *base;
            config.env = env;
            config.algo = Algo::Fpg;
            config.alpha = alpha;
            config.seed = base.seed + i as u64;
            config.validate()?;
            jobs.push((ai, config));
        }
    }
    let outcomes = map_items(jobs, workers, |(ai, config)| {
        (ai, train(&config).map(|run| run.metrics))
    });
    let threshold = Env::new(env).spec().solved_threshold;
    let mut rows = Vec::with_capacity(alphas.len());
    for (ai, &alpha) in alphas.iter().enumerate() {
        let tables: Vec<&Vec<MetricsRecord>> = outcomes
            .iter()
            .filter_map(|(i, res)| (*i == ai).then_some(res.as_ref().ok()).flatten())
            .collect();
        let e2t: Vec<Option<usize>> = tables
            .iter()
            .map(|t| {
                let returns: Vec<f64> = t.iter().map(|m| m.ret).collect();
                episodes_to_threshold(&returns, threshold)
            })
            .collect();
        let finals: Vec<f64> = tables.iter().map(|t| final_window_return(t)).collect();
        let grad_vars: Vec<f64> = tables.iter().map(|t| final_third_grad_var(t)).collect();
        let (mean_ret, var_ret) = mean_var(&finals);
        let (mean_gv, _) = mean_var(&grad_vars);
        rows.push(SweepRow {
            alpha,
            seeds_completed: tables.len(),
            median_episodes_to_threshold: median_episodes(&e2t),
            mean_final_return: mean_ret,
            ci95_final_return: ci95_half(var_ret.sqrt(), finals.len()),
            mean_final_grad_var: mean_gv,
        });
    }
    Ok(rows)
}
