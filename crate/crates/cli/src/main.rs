use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use railyard_cli::commands::{run, Command, Overrides};
use railyard_cli::config::ExperimentConfig;
use railyard_cli::CliError;

/// Dimer coverings of rail-yard graphs: partition functions, sampling and
/// limit shapes.
#[derive(Parser)]
#[command(name = "railyard", version)]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed, overriding `task.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Truncation cap on |λ|, overriding `task.cap`.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Worker threads; falls back to RAILYARD_THREADS, then all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Partition function by transfer vectors and by the product formula.
    Z,
    /// Seeded draws: covering sequences and column occupancies.
    Sample,
    /// Limit moments as CSV (k, value).
    Moments,
    /// Limit density on a κ grid as CSV (kappa, f).
    Density,
    /// Frozen boundary of a staircase boundary: CSV, SVG, summary.
    Frozen,
    /// Frozen-boundary components of a piecewise boundary.
    FrozenPiecewise,
    /// Validate the config (if any) and run the verification suite.
    Verify,
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("RAILYARD_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("RAILYARD_THREADS={v} is not a count"))),
        Err(_) => Ok(None),
    }
}

fn main_inner(args: Args) -> Result<(), CliError> {
    if let Some(n) = threads(args.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Run(e.to_string()))?;
    }
    let cfg = args
        .config
        .as_deref()
        .map(ExperimentConfig::load)
        .transpose()?;
    let cmd = match args.command {
        Cmd::Z => Command::Z,
        Cmd::Sample => Command::Sample,
        Cmd::Moments => Command::Moments,
        Cmd::Density => Command::Density,
        Cmd::Frozen => Command::Frozen,
        Cmd::FrozenPiecewise => Command::FrozenPiecewise,
        Cmd::Verify => Command::Verify,
    };
    let ov = Overrides {
        out: args.out,
        seed: args.seed,
        cap: args.cap,
    };
    run(cmd, cfg, &ov)
}

fn main() -> ExitCode {
    match main_inner(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("railyard: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
