//! CSV writers and parsers for run metrics, kernel reports, suite summaries,
//! sweep tables, and plot data.
//!
//! Floating-point values are written with Rust's shortest round-trip
//! formatting, so parsing a file back reproduces the original numbers bit
//! for bit. Every file starts with `#` comment lines carrying the full
//! configuration (section-qualified `key = value`), making any artifact
//! self-describing and re-runnable.

use std::io::{self, Write};

use crate::bench::{MetricsRecord, SuiteResult, SweepRow};
use crate::error::{Error, Result};
use crate::frac_td::KernelFidelityReport;
use crate::trainer::{apply_config_kv, config_kv, TrainConfig};

pub const METRICS_HEADER: &str =
    "episode,steps,return,grad_var_window,max_abs_frac_delta,clip_events,wall_ms";

/// Write one training run's metrics with its full config as `#` comments.
pub fn write_metrics_csv<W: Write>(
    w: &mut W,
    config: &TrainConfig,
    rows: &[MetricsRecord],
) -> io::Result<()> {
    let mut section = "";
    for (sec, key, value) in config_kv(config) {
        if sec != section {
            writeln!(w, "# [{sec}]")?;
            section = sec;
        }
        writeln!(w, "# {key} = {value}")?;
    }
    writeln!(w, "{METRICS_HEADER}")?;
    for m in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            m.episode, m.steps, m.ret, m.grad_var_window, m.max_abs_frac_delta, m.clip_events,
            m.wall_ms
        )?;
    }
    Ok(())
}

pub fn metrics_csv_string(config: &TrainConfig, rows: &[MetricsRecord]) -> String {
    let mut buf = Vec::new();
    write_metrics_csv(&mut buf, config, rows).expect("in-memory write cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

/// Parse a metrics CSV produced by [`write_metrics_csv`] back into the
/// config it recorded and its rows (bit-exact round trip).
pub fn parse_metrics_csv(text: &str) -> Result<(TrainConfig, Vec<MetricsRecord>)> {
    let mut config = TrainConfig::defaults_for(
        crate::envs::EnvKind::CartPole,
        crate::trainer::Algo::Fpg,
        0,
    );
    let mut section = String::new();
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(sec) = comment.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = sec.to_string();
            } else if let Some((key, value)) = comment.split_once('=') {
                apply_config_kv(&mut config, &section, key.trim(), value.trim())
                    .map_err(|e| Error::Config(format!("line {}: {e}", ln + 1)))?;
            }
            continue;
        }
        if !saw_header {
            if line != METRICS_HEADER {
                return Err(Error::Config(format!(
                    "line {}: expected column header '{METRICS_HEADER}', got '{line}'",
                    ln + 1
                )));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Config(format!(
                "line {}: expected 7 fields, got {}",
                ln + 1,
                fields.len()
            )));
        }
        fn field<T: std::str::FromStr>(ln: usize, name: &str, s: &str) -> Result<T> {
            s.parse().map_err(|_| {
                Error::Config(format!("line {}: invalid {name} value '{s}'", ln + 1))
            })
        }
        rows.push(MetricsRecord {
            episode: field(ln, "episode", fields[0])?,
            steps: field(ln, "steps", fields[1])?,
            ret: field(ln, "return", fields[2])?,
            grad_var_window: field(ln, "grad_var_window", fields[3])?,
            max_abs_frac_delta: field(ln, "max_abs_frac_delta", fields[4])?,
            clip_events: field(ln, "clip_events", fields[5])?,
            wall_ms: field(ln, "wall_ms", fields[6])?,
        });
    }
    if !saw_header {
        return Err(Error::Config("metrics CSV has no column header".into()));
    }
    Ok((config, rows))
}

/// Kernel fidelity report: one row per (variant, step), with run settings
/// and per-strategy timing summaries in the comments.
pub fn write_kernel_csv<W: Write>(w: &mut W, report: &KernelFidelityReport) -> io::Result<()> {
    writeln!(w, "# alpha = {}", report.alpha)?;
    writeln!(w, "# horizon = {}", report.horizon)?;
    writeln!(w, "# seeds = {}", report.seeds)?;
    writeln!(w, "# fir_window = {}", report.fir_window)?;
    for profile in [&report.naive_timing, &report.fir_timing, &report.recursive_timing] {
        writeln!(
            w,
            "# timing {}: first_decile_ns = {}, last_decile_ns = {}, ratio = {}",
            profile.label,
            profile.first_decile_mean_ns,
            profile.last_decile_mean_ns,
            profile.decile_ratio()
        )?;
    }
    for v in &report.variants {
        writeln!(
            w,
            "# variant {}/{}: error_slope = {}, r2 = {}, clip_events = {}, bound_violations = {}",
            v.mu_variant, v.eta_variant, v.error_slope, v.slope_r2, v.clip_events_total,
            v.bound_violations
        )?;
    }
    writeln!(w, "mu_variant,eta_variant,t,abs_error,bound_value,step_time_ns")?;
    for v in &report.variants {
        for s in &v.steps {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                v.mu_variant, v.eta_variant, s.t, s.abs_error, s.bound_value, s.step_time_ns
            )?;
        }
    }
    Ok(())
}

fn fmt_opt(value: Option<usize>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Suite summary: one row per cell with efficiency, return, variance, and
/// significance columns (welch columns empty for the baseline itself).
pub fn write_suite_csv<W: Write>(w: &mut W, suite: &SuiteResult) -> io::Result<()> {
    writeln!(w, "# env = {}", suite.env)?;
    writeln!(w, "# threshold = {}", suite.threshold)?;
    writeln!(w, "# seeds_requested = {}", suite.seeds_requested)?;
    if let Some(base) = &suite.baseline_label {
        writeln!(w, "# baseline = {base}")?;
    }
    for (label, seed, err) in &suite.failures {
        writeln!(w, "# failed: {label} seed {seed}: {err}")?;
    }
    writeln!(
        w,
        "label,algo,seeds_completed,median_episodes_to_threshold,mean_final_return,\
         ci95_final_return,mean_final_grad_var,ci95_final_grad_var,mean_clip_events,\
         welch_t,welch_dof,welch_p_less"
    )?;
    for s in &suite.summaries {
        let welch = suite.welch_for(&s.label);
        let (wt, wdof, wp) = match welch {
            Some(row) => {
                (row.test.t.to_string(), row.test.dof.to_string(), row.p_less.to_string())
            }
            None => (String::new(), String::new(), String::new()),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            s.label,
            s.algo,
            s.seeds_completed,
            fmt_opt(s.median_episodes_to_threshold),
            s.mean_final_return,
            s.ci95_final_return,
            s.mean_final_grad_var,
            s.ci95_final_grad_var,
            s.mean_clip_events,
            wt,
            wdof,
            wp
        )?;
    }
    Ok(())
}

/// Plot data: per-episode series (mean return, mean windowed gradient
/// variance, variance ratio vs baseline) for external plotting tools.
pub fn write_plot_csv<W: Write>(w: &mut W, suite: &SuiteResult) -> io::Result<()> {
    writeln!(w, "# env = {}", suite.env)?;
    writeln!(w, "label,episode,mean_return,mean_grad_var_window,variance_ratio_vs_baseline")?;
    for cell in &suite.cells {
        if cell.tables.is_empty() {
            continue;
        }
        let common = cell.tables.iter().map(|(_, t)| t.len()).min().unwrap_or(0);
        let ratio = suite
            .variance_ratio
            .iter()
            .find(|(label, _)| *label == cell.label)
            .map(|(_, series)| series);
        for e in 0..common {
            let n = cell.tables.len() as f64;
            let mean_ret = cell.tables.iter().map(|(_, t)| t[e].ret).sum::<f64>() / n;
            let mean_gv =
                cell.tables.iter().map(|(_, t)| t[e].grad_var_window).sum::<f64>() / n;
            let ratio_str = ratio
                .and_then(|series| {
                    series.iter().find(|(ep, _)| *ep == e + 1).map(|(_, r)| r.to_string())
                })
                .unwrap_or_default();
            writeln!(w, "{},{},{},{},{}", cell.label, e + 1, mean_ret, mean_gv, ratio_str)?;
        }
    }
    Ok(())
}

/// α-sweep table: one row per α.
pub fn write_sweep_csv<W: Write>(w: &mut W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(
        w,
        "alpha,seeds_completed,median_episodes_to_threshold,mean_final_return,\
         ci95_final_return,mean_final_grad_var"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.alpha,
            r.seeds_completed,
            fmt_opt(r.median_episodes_to_threshold),
            r.mean_final_return,
            r.ci95_final_return,
            r.mean_final_grad_var
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::EnvKind;
    use crate::trainer::{train, Algo};

    fn sample_rows() -> Vec<MetricsRecord> {
        vec![
            MetricsRecord {
                episode: 1,
                steps: 17,
                ret: 17.0,
                grad_var_window: 0.123456789123456789,
                max_abs_frac_delta: 1.0000000000000002,
                clip_events: 3,
                wall_ms: 0.25,
            },
            MetricsRecord {
                episode: 2,
                steps: 500,
                ret: 500.0,
                grad_var_window: 1e-17,
                max_abs_frac_delta: f64::MIN_POSITIVE,
                clip_events: 0,
                wall_ms: 123.456,
            },
        ]
    }

    #[test]
    fn metrics_csv_round_trips_bit_exactly() {
        let mut config = TrainConfig::defaults_for(EnvKind::Pendulum, Algo::Fpg, 42);
        config.alpha = 0.675;
        config.ablations.minibatch_off = true;
        let rows = sample_rows();
        let text = metrics_csv_string(&config, &rows);
        let (parsed_config, parsed_rows) = parse_metrics_csv(&text).unwrap();
        assert_eq!(parsed_config, config);
        assert_eq!(parsed_rows, rows);
        // And writing again is byte-identical.
        assert_eq!(metrics_csv_string(&parsed_config, &parsed_rows), text);
    }

    #[test]
    fn metrics_csv_rejects_malformed_input() {
        assert!(parse_metrics_csv("").is_err());
        assert!(parse_metrics_csv("episode,steps\n1,2\n").is_err());
        let good_header = format!("{METRICS_HEADER}\n1,2,3\n");
        assert!(parse_metrics_csv(&good_header).is_err());
        let bad_value = format!("{METRICS_HEADER}\n1,2,x,4,5,6,7\n");
        assert!(parse_metrics_csv(&bad_value).is_err());
        let bad_key = format!("# [train]\n# mystery = 1\n{METRICS_HEADER}\n");
        assert!(parse_metrics_csv(&bad_key).is_err());
    }

    #[test]
    fn identical_runs_produce_identical_csv_modulo_wall_ms() {
        let mut config = TrainConfig::defaults_for(EnvKind::CartPole, Algo::Fpg, 9);
        config.max_episodes = 6;
        config.hidden = 8;
        let a = train(&config).unwrap();
        let b = train(&config).unwrap();
        let mask = |text: &str| -> String {
            text.lines()
                .map(|l| {
                    if l.starts_with('#') || l == METRICS_HEADER {
                        l.to_string()
                    } else {
                        let (head, _) = l.rsplit_once(',').unwrap();
                        format!("{head},_")
                    }
                })
                .collect::<Vec<_>>()
                .join("\n")
        };
        let csv_a = metrics_csv_string(&config, &a.metrics);
        let csv_b = metrics_csv_string(&config, &b.metrics);
        assert_eq!(mask(&csv_a), mask(&csv_b));
    }

    #[test]
    fn suite_aggregation_is_pure_over_csv_files() {
        use crate::bench::{aggregate_suite, run_suite, CellTables, SuiteConfig};
        let mut suite = SuiteConfig::new(EnvKind::CartPole, vec![Algo::Fpg, Algo::A2c], 2);
        suite.base.max_episodes = 8;
        suite.base.hidden = 8;
        suite.base.minibatch = 8;
        suite.base.seed = 500;
        let result = run_suite(&suite).unwrap();

        // Store every run as CSV, parse back, re-aggregate.
        let mut rebuilt = Vec::new();
        for cell in &result.cells {
            let mut tables = Vec::new();
            for (seed, rows) in &cell.tables {
                let mut config = cell.config;
                config.seed = *seed;
                let text = metrics_csv_string(&config, rows);
                let (parsed_config, parsed_rows) = parse_metrics_csv(&text).unwrap();
                assert_eq!(parsed_config.seed, *seed);
                tables.push((parsed_config.seed, parsed_rows));
            }
            rebuilt.push(CellTables {
                label: cell.label.clone(),
                config: cell.config,
                tables,
            });
        }
        let again =
            aggregate_suite(result.env, result.seeds_requested, rebuilt, Some("a2c")).unwrap();
        for (x, y) in result.summaries.iter().zip(&again.summaries) {
            assert_eq!(x.label, y.label);
            assert_eq!(x.episodes_to_threshold, y.episodes_to_threshold);
            assert_eq!(x.mean_final_return, y.mean_final_return);
            assert_eq!(x.ci95_final_return, y.ci95_final_return);
            assert_eq!(x.final_grad_var_per_seed, y.final_grad_var_per_seed);
            assert_eq!(x.mean_final_grad_var, y.mean_final_grad_var);
        }
        for (x, y) in result.welch.iter().zip(&again.welch) {
            assert_eq!(x.test.t, y.test.t);
            assert_eq!(x.test.dof, y.test.dof);
            assert_eq!(x.p_less, y.p_less);
        }
        assert_eq!(result.variance_ratio, again.variance_ratio);
    }

    #[test]
    fn suite_and_plot_and_sweep_writers_emit_expected_shape() {
        use crate::bench::{alpha_sweep, run_suite, SuiteConfig};
        let mut suite = SuiteConfig::new(EnvKind::CartPole, vec![Algo::Fpg, Algo::A2c], 2);
        suite.base.max_episodes = 5;
        suite.base.hidden = 8;
        suite.base.minibatch = 8;
        let result = run_suite(&suite).unwrap();
        let mut buf = Vec::new();
        write_suite_csv(&mut buf, &result).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let data_lines: Vec<&str> =
            text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data_lines.len(), 3); // header + 2 cells
        assert!(data_lines[0].starts_with("label,algo,"));
        assert!(data_lines[1].starts_with("fpg,fpg,2,"));

        let mut buf = Vec::new();
        write_plot_csv(&mut buf, &result).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows = text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("label,")).count();
        assert_eq!(rows, 2 * 5); // 2 cells × 5 episodes

        let mut base = suite.base;
        base.max_episodes = 4;
        let sweep = alpha_sweep(EnvKind::CartPole, &[0.6, 0.7], 2, &base, 0).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &sweep).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().starts_with("0.6,2,"));
    }

    #[test]
    fn kernel_csv_has_row_per_variant_step() {
        use crate::frac_td::{all_variant_pairs, kernel_fidelity_report};
        let variants = all_variant_pairs();
        let report = kernel_fidelity_report(0.5, 120, 2, &variants[..2]).unwrap();
        let mut buf = Vec::new();
        write_kernel_csv(&mut buf, &report).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("mu_variant,"))
            .count();
        assert_eq!(rows, 2 * 120);
        assert!(text.contains("# timing recursive"));
    }
}
