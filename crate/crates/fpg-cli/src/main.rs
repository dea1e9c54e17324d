//! `fpg` — fractional policy gradient trainer and benchmark harness.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical abort during
//! training, 3 kernel-check invariant failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use fpg_core::envs::EnvKind;
use fpg_core::trainer::Algo;

#[derive(Parser)]
#[command(
    name = "fpg",
    version,
    about = "Train policies with fractional-memory TD errors and benchmark them against baselines"
)]
struct Cli {
    /// Root directory for output paths (default: $FPG_OUT_ROOT, else ".").
    #[arg(long, global = true)]
    out_root: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the recursive kernel: per-step error vs the exact convolution,
    /// constant-time behaviour, and the adaptive clip bound.
    KernelCheck {
        /// Fractional order, in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Horizon (steps per sequence); at least 100.
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Random δ sequences to aggregate over.
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// Report CSV path, relative to the output root.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one training session from a config file.
    Train {
        /// Config or manifest file ([train]/[frac]/[ablations] sections).
        #[arg(long)]
        config: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's episode count.
        #[arg(long)]
        episodes: Option<usize>,
        /// Output directory for metrics.csv, checkpoints, and manifest.txt.
        #[arg(long, default_value = "run")]
        out: PathBuf,
    },
    /// Run a multi-algorithm, multi-seed comparison suite.
    Bench {
        #[arg(long)]
        env: EnvArg,
        /// Comma-separated algorithms (fpg, a2c, reinforce, ppo_lite).
        #[arg(long, default_value = "fpg,a2c,reinforce")]
        algos: String,
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// Episode count per run (default: the config's / environment's).
        #[arg(long)]
        episodes: Option<usize>,
        /// Base config file for every cell (defaults per environment).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Add one FPG cell per ablation switch.
        #[arg(long)]
        ablations: bool,
        /// Baseline cell for variance ratios and significance tests.
        #[arg(long, default_value = "a2c")]
        baseline: AlgoArg,
        /// Worker threads (0 = automatic). Results do not depend on this.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Output directory.
        #[arg(long, default_value = "suite")]
        out: PathBuf,
    },
    /// Sweep the fractional order α and tabulate per-α statistics.
    Sweep {
        #[arg(long)]
        env: EnvArg,
        /// Inclusive grid start:end:step, e.g. 0.5:0.9:0.05.
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        /// Episode count per run (default: the config's / environment's).
        #[arg(long)]
        episodes: Option<usize>,
        /// Base config file (defaults per environment).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Worker threads (0 = automatic).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Output directory.
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
    },
}

/// Clap-friendly wrapper so bad values read as usage errors.
#[derive(Clone)]
struct EnvArg(EnvKind);

impl std::str::FromStr for EnvArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(EnvArg).map_err(|e| format!("{e}"))
    }
}

#[derive(Clone)]
struct AlgoArg(Algo);

impl std::str::FromStr for AlgoArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(AlgoArg).map_err(|e| format!("{e}"))
    }
}

fn out_root(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("FPG_OUT_ROOT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let root = out_root(cli.out_root);
    let outcome = match cli.command {
        Command::KernelCheck { alpha, steps, seeds, out } => {
            commands::cmd_kernel_check(&root, alpha, steps, seeds, out)
        }
        Command::Train { config, seed, episodes, out } => {
            commands::cmd_train(&root.join(out), &config, seed, episodes)
        }
        Command::Bench {
            env,
            algos,
            seeds,
            episodes,
            config,
            ablations,
            baseline,
            workers,
            out,
        } => commands::cmd_bench(
            &root.join(out),
            env.0,
            &algos,
            seeds,
            episodes,
            config.as_deref(),
            ablations,
            baseline.0,
            workers,
        ),
        Command::Sweep { env, alpha, seeds, episodes, config, workers, out } => {
            commands::cmd_sweep(
                &root.join(out),
                env.0,
                &alpha,
                seeds,
                episodes,
                config.as_deref(),
                workers,
            )
        }
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
