//! `cornerwave` command-line front end.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use config::{ExperimentConfig, Settings};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cornerwave", version, about = "Corner rounding and Helmholtz scattering from polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Round polygon corners; writes curve JSON and polyline CSV per width.
    Smooth(Opts),
    /// Panel meshes as CSV per width.
    Discretize(Opts),
    /// Plane-wave scattering: density CSV and metadata JSON per width.
    Solve(Opts),
    /// Mono-static, bi-static or far-field cross sections per width.
    Xsection(Opts),
    /// Sweep over widths against the corner reference; writes the convergence table.
    Converge(Opts),
    /// Harmonic extension coefficients and sampled maps.
    Diffeo(Opts),
}

#[derive(clap::Args)]
struct Opts {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: ExperimentConfig,
}

/// Failure with its exit status: 2 for usage and configuration, 3 for numerical failures.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(cornerwave::Error),
}

impl From<cornerwave::Error> for CliError {
    fn from(e: cornerwave::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        use cornerwave::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                E::InvalidArgument(_)
                | E::DegenerateGeometry(_)
                | E::NearBoundary { .. }
                | E::Budget { .. }
                | E::Io(_)
                | E::Json(_) => 2,
                E::Singularity(_) | E::InfeasibleTolerance(_) | E::NearResonance { .. } => 3,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

fn settings(opts: Opts) -> Result<Settings, CliError> {
    let base = match &opts.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    Settings::resolve(base.overlay(opts.flags))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Smooth(o) => commands::smooth(&settings(o)?),
        Command::Discretize(o) => commands::discretize(&settings(o)?),
        Command::Solve(o) => commands::solve(&settings(o)?),
        Command::Xsection(o) => commands::xsection(&settings(o)?),
        Command::Converge(o) => commands::converge(&settings(o)?),
        Command::Diffeo(o) => commands::diffeo(&settings(o)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
