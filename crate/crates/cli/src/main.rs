//! `spectra`: spectra, verification, nodeless scans, Darboux partners and
//! identity checks for rational-tangent potentials.
//!
//! Units are dimensionless throughout (hbar = 2m = 1): the Schrodinger
//! operator is `-d^2/dx^2 + V(x)`.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Context;
use error::CliError;
use output::OutDir;

#[derive(Parser)]
#[command(name = "spectra", version, about, long_about = None)]
#[command(after_help = "Units are dimensionless (hbar = 2m = 1). Exit codes: 0 ok, 1 verification failure, \
                        2 configuration error, 3 numeric failure.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Tolerance overriding the configured or command default.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for parallel commands; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    workers: u16,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Bound-state spectrum and eigenfunctions.
    Spectrum,
    /// Cross-check the constructive spectrum against shooting.
    Verify,
    /// Nodeless-region scan over the Scarf II parameter plane.
    ScanNodeless,
    /// Darboux partner of the configured potential.
    Partner,
    /// Polynomial and spectral identity battery.
    Identities,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| config::ConfigError {
        location: "--config".into(),
        message: "a configuration file is required".into(),
    })?;
    let loaded = config::load(path)?;
    let tol = cli.tol.map(|t| config::check_tol("--tol", t)).transpose()?;
    let out = OutDir::create(&cli.out)?;
    let mut ctx = Context { loaded, out, tol, workers: cli.workers as usize };
    match cli.command {
        Command::Spectrum => commands::spectrum(&mut ctx),
        Command::Verify => commands::verify(&mut ctx),
        Command::ScanNodeless => commands::scan_nodeless(&mut ctx),
        Command::Partner => commands::partner(&mut ctx),
        Command::Identities => commands::identities(&mut ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("spectra: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("spectra: {e}");
            e.exit_code()
        }
    }
}
