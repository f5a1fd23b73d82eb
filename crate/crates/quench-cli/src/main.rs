//! `quench` — config-driven spin-chain quench runs.
//!
//! Exit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quench_cli::config::{self, Overrides};
use quench_cli::error::{CliError, Result};
use quench_cli::figures;
use quench_cli::pipeline::{self, Command};

#[derive(Parser)]
#[command(
    name = "quench",
    version,
    about = "Global quenches of long-range Ising and XY spin chains",
    after_help = "Exit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O failure."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the coupling matrix (and ion geometry) only.
    Couplings(RunArgs),
    /// Evolve the chain and emit correlations, shots, trajectory.
    Evolve(RunArgs),
    /// Full pipeline: evolution plus every analysis the config enables.
    Analyze(RunArgs),
    /// Emit the analytic bound tables for the configured couplings.
    Bounds(RunArgs),
    /// Run a canned figure recipe: fig2, fig3, fig4, or figs1.
    Reproduce {
        /// Which recipe to run.
        id: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Path to the run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Concurrent sub-runs for sweeps.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Override the sampling seed (requires a [shots] section).
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Table format: csv (default) or json.
    #[arg(long)]
    format: Option<String>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            out: self.out.as_ref().map(|p| p.to_string_lossy().into_owned()),
            format: self.format.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("quench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let (command, cfg, jobs) = match cli.cmd {
        Cmd::Couplings(a) => (Command::Couplings, load(&a)?, a.common.jobs),
        Cmd::Evolve(a) => (Command::Evolve, load(&a)?, a.common.jobs),
        Cmd::Analyze(a) => (Command::Analyze, load(&a)?, a.common.jobs),
        Cmd::Bounds(a) => (Command::Bounds, load(&a)?, a.common.jobs),
        Cmd::Reproduce { id, common } => {
            let text = figures::lookup(&id).ok_or_else(|| {
                CliError::Config(format!(
                    "unknown figure id \"{id}\"; expected one of {}",
                    figures::IDS.join(", ")
                ))
            })?;
            let cfg = config::parse_config_str(text, &common.overrides())?;
            (Command::Analyze, cfg, common.jobs)
        }
    };
    let outcome = pipeline::run(command, &cfg, jobs)?;
    println!("wrote {} ({} files)", outcome.manifest.display(), outcome.n_files);
    Ok(())
}

fn load(a: &RunArgs) -> Result<config::RunConfig> {
    config::parse_config(&a.config, &a.common.overrides())
}
