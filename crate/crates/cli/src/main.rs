//! `trisumo` command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or format error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use trisumo_core::harness::{self, Checkpoint, HarnessError, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "trisumo", version, about = "Train and evaluate a DDPG teammate in two-versus-one sumo")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train a learner from a JSON run config.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` in the config.
        #[arg(long)]
        out: PathBuf,
    },
    /// Greedy evaluation of a checkpoint; prints a JSON report.
    Evaluate {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
        episodes: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Record one greedy episode as CSV.
    Rollout {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render training curves from a metrics CSV to SVG.
    Plot {
        #[arg(long)]
        metrics: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("TRISUMO_LOG", "info");
    env_logger::Builder::from_env(env).format_timestamp(None).init();
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Train { config, out } => {
            let mut cfg = RunConfig::load(&config)?;
            cfg.output_dir = Some(out);
            let summary = harness::train(&cfg)?;
            log::info!(
                "trained {} episodes ({} updates); metrics {}, checkpoint {}",
                summary.history.len(),
                summary.updates,
                summary.metrics_path.display(),
                summary.final_checkpoint.display()
            );
        }
        Command::Evaluate {
            checkpoint,
            episodes,
            seed,
        } => {
            let ck = Checkpoint::load(&checkpoint)?;
            let report = harness::evaluate(&ck, episodes, seed)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::Rollout { checkpoint, seed, out } => {
            let ck = Checkpoint::load(&checkpoint)?;
            let steps = harness::rollout_to_csv(&ck, seed, &out)?;
            log::info!("wrote {steps} steps to {}", out.display());
        }
        Command::Plot { metrics, out } => {
            harness::plot(&metrics, &out)?;
            log::info!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    init_logging();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
