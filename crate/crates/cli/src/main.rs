//! `fracsys`: config-driven runs and parameter sweeps.
//!
//! Exit status: 0 converged, 1 not converged or runtime failure, 2 bad
//! configuration or usage, 3 refused by a hypothesis check.

mod artifacts;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Axis;
use config::RunConfig;

/// Env var that may override the output directory. Nothing else is read from
/// the environment.
const OUT_ENV: &str = "FRACSYS_OUT";
const DEFAULT_OUT: &str = "fracsys-out";

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Refused {
        message: String,
        violations: Vec<String>,
    },
    Solver(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Refused { .. } => 3,
            Failure::Solver(_) | Failure::Io(_) => 1,
        }
    }

    fn report(&self) {
        match self {
            Failure::Config(m) => eprintln!("config error: {m}"),
            Failure::Refused {
                message,
                violations,
            } => {
                eprintln!("refused: {message}");
                for v in violations {
                    eprintln!("  - {v}");
                }
            }
            Failure::Solver(m) => eprintln!("solver error: {m}"),
            Failure::Io(m) => eprintln!("i/o error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "fracsys", version, about = "Spectral solvers for coupled fractional systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve once and write report.json, trace.csv and the u/v field files.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Repeat over an axis: `q=2,3,4` (mountain pass) or `seed=0,1,2`
    /// (uniqueness check with both sublinear solvers).
    Sweep {
        config: PathBuf,
        #[arg(long)]
        axis: Axis,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(clap::Args)]
struct Common {
    /// Output directory; overrides FRACSYS_OUT and the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replaces options.seed from the config.
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self, path: &PathBuf) -> Result<(RunConfig, PathBuf), Failure> {
        let mut config = RunConfig::load(path)?;
        if let Some(seed) = self.seed {
            config.options.seed = seed;
        }
        let out = self
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .or_else(|| config.output.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        Ok((config, out))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, common } => {
            common.load(config).and_then(|(c, out)| commands::run(&c, out))
        }
        Command::Sweep {
            config,
            axis,
            common,
        } => common
            .load(config)
            .and_then(|(c, out)| commands::sweep(&c, axis, out)),
    };
    match result {
        Ok(o) => {
            println!("{}", o.line);
            println!("artifacts in {}", o.out.display());
            if o.converged {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            f.report();
            ExitCode::from(f.code())
        }
    }
}
