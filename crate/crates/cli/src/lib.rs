//! Command-line front end: parameter input, verification suites, sweeps and
//! CSV/JSON output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::config::{Overrides, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "lienard", version, about = "Quantized Lienard oscillator: spectra, eigenfunctions and checks")]
pub struct Cli {
    /// JSON file with any run settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// RK4 trajectory against the closed-form solution.
    Classical(Overrides),
    /// Closed-form energy levels.
    Spectrum(Overrides),
    /// Sampled eigenfunction.
    Wavefn(Overrides),
    /// Run every check and report pass/fail.
    Verify(Overrides),
    /// Harmonic-limit studies.
    Limit(Overrides),
    /// Parallel parameter sweep.
    Sweep(Overrides),
}

impl Command {
    fn parts(&self) -> (&'static str, &Overrides) {
        match self {
            Command::Classical(o) => ("classical", o),
            Command::Spectrum(o) => ("spectrum", o),
            Command::Wavefn(o) => ("wavefn", o),
            Command::Verify(o) => ("verify", o),
            Command::Limit(o) => ("limit", o),
            Command::Sweep(o) => ("sweep", o),
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let (name, flags) = cli.command.parts();
    let cfg = RunConfig::resolve(cli.config.as_deref(), flags)?;
    let outcome = match name {
        "classical" => commands::classical(&cfg)?,
        "spectrum" => commands::spectrum(&cfg)?,
        "wavefn" => commands::wavefn(&cfg)?,
        "verify" => commands::verify(&cfg)?,
        "limit" => commands::limit(&cfg)?,
        _ => commands::sweep(&cfg)?,
    };
    let path = cfg.output_path(name);
    output::write_output(&outcome.table, &output::meta(name, cfg.echo()), cfg.format, &path)?;

    for r in &outcome.records {
        println!(
            "{} {:<36} measured={:<24} expected={:<10} tol={:e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.check,
            output::format_float(r.measured),
            r.expected,
            r.tolerance
        );
    }
    println!("{name}: {} rows -> {}", outcome.table.rows.len(), path.display());
    let failed = outcome.records.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        println!("{failed} of {} checks failed", outcome.records.len());
        return Ok(1);
    }
    Ok(0)
}

/// Parse `argv`, run the command and return the process exit code:
/// 0 when every check passes, 1 when one fails, 2 on invalid input.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
