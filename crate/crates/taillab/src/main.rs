use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use taillab::config::{ExperimentConfig, Stage};
use taillab::pool::RayonMap;
use taillab::selfcheck::selfcheck;
use taillab::{pipeline, Failure};

/// Late-time tails of 1D wave equations with inverse-power potentials.
#[derive(Parser)]
#[command(name = "taillab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage listed in the config's [pipeline] section.
    Run {
        /// Experiment config file.
        config: PathBuf,
    },
    /// Run the fast closed-form consistency suite.
    Selfcheck,
    /// Run only the bound-state / zero-resonance check.
    Spectral {
        /// Experiment config file.
        config: PathBuf,
    },
    /// Spectral check, leapfrog simulation and decay fit.
    Decay {
        /// Experiment config file.
        config: PathBuf,
    },
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    let (path, name, stages): (PathBuf, &str, Option<&[Stage]>) = match cli.command {
        Command::Selfcheck => {
            let report = selfcheck();
            print!("{}", report.render());
            return Ok(if report.passed() { 0 } else { 4 });
        }
        Command::Run { config } => (config, "run", None),
        Command::Spectral { config } => (config, "spectral", Some(&[Stage::Spectral])),
        Command::Decay { config } => (config, "decay", Some(&[Stage::Spectral, Stage::Simulate, Stage::Decay])),
    };
    let mut cfg = ExperimentConfig::load(&path)?;
    if let Some(st) = stages {
        cfg = cfg.with_stages(st)?;
    }
    let pool = RayonMap::from_env()?;
    let outcome = pipeline::run(&cfg, name, &pool)?;
    print!("{}", outcome.summary);
    if let Some(f) = &outcome.failure {
        eprintln!("taillab: {f}");
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("taillab: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
