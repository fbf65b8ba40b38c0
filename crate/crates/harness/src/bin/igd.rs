use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use igd_harness::runner::{profile_gap, run_single, run_sweep};
use igd_harness::validate::{has_errors, info, validate_config};
use igd_harness::ExperimentConfig;

#[derive(Parser)]
#[command(name = "igd", version, about = "Constrained potential-game solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `[output] dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random initialization; overrides `solver.seed`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver once and write its artifacts.
    Run(Common),
    /// Run every point of the sweep grids.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Concurrent runs; defaults to `sweep.workers` or the CPU count.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Check a config without running it.
    Validate(Common),
    /// Nash gap of a saved profile.
    Gap {
        #[command(flatten)]
        common: Common,
        /// A `profile.toml` written by `run`.
        #[arg(long)]
        profile: PathBuf,
        /// Use the stationarity witness instead of the final iterate.
        #[arg(long)]
        best: bool,
    },
    /// Print instance constants, step sizes and iteration bounds.
    Info {
        #[command(flatten)]
        common: Common,
        /// Target accuracy for the iteration bound.
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
    },
}

fn load(common: &Common) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.solver.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output.dir = out.clone();
    }
    Ok(cfg)
}

/// Prints diagnostics and fails on errors.
fn checked(common: &Common) -> anyhow::Result<ExperimentConfig> {
    let cfg = load(common)?;
    let diagnostics = validate_config(&cfg);
    for d in &diagnostics {
        eprintln!("{d}");
    }
    if has_errors(&diagnostics) {
        bail!("{} has errors", common.config.display());
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run(common) => {
            let cfg = checked(&common)?;
            let record = run_single(&cfg, &cfg.output.dir).context("run failed")?;
            if !common.quiet {
                println!("fingerprint  {}", record.fingerprint);
                println!("eta          {:e}", record.eta);
                println!("nash gap     {:e} -> {:e}", record.initial_gap, record.final_gap);
                println!("violation    {:e}", record.final_violation);
                println!("sum lambda   {:e}", record.final_lambda_sum);
                println!("wrote        {}", record.dir.display());
            }
        }
        Command::Sweep { common, workers } => {
            let cfg = checked(&common)?;
            let outcome = run_sweep(&cfg, &cfg.output.dir, workers)?;
            if !common.quiet {
                println!(
                    "{} runs, {} failed; summary in {}",
                    outcome.records.len() + outcome.failures.len(),
                    outcome.failures.len(),
                    outcome.summary.display()
                );
            }
            for (point, err) in &outcome.failures {
                eprintln!("{}: {err}", point.dir_name());
            }
        }
        Command::Validate(common) => {
            let cfg = load(&common)?;
            let diagnostics = validate_config(&cfg);
            for d in &diagnostics {
                println!("{d}");
            }
            if has_errors(&diagnostics) {
                bail!("{} has errors", common.config.display());
            }
            if !common.quiet && diagnostics.is_empty() {
                println!("ok");
            }
        }
        Command::Gap {
            common,
            profile,
            best,
        } => {
            let cfg = load(&common)?;
            let report = profile_gap(&cfg, &profile, best)?;
            for (i, (g, raw)) in report.per_player.iter().zip(&report.raw).enumerate() {
                println!("player {i}  gap {g:e}  raw {raw:e}");
            }
            println!("total {:e}", report.total);
        }
        Command::Info { common, eps } => {
            let cfg = load(&common)?;
            print!("{}", info(&cfg.resolve()?, eps)?);
        }
    }
    Ok(())
}
