//! `entvis` — sweep tables and verification for the coupled-oscillator
//! entanglement witness library.
//!
//! Every subcommand writes one deterministic table (CSV or JSON) to
//! stdout or to `--output`; identical invocations produce byte-identical
//! bytes. Exit codes: 0 success, 1 parameter error, 2 numerical failure,
//! 3 verification mismatch.

mod commands;
mod table;
mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use table::{write_csv, write_json, Table};

#[derive(Debug)]
pub enum CliError {
    /// Invalid parameters (exit 1).
    Param(String),
    /// Numerical failure propagated from the library (exit 2).
    Numeric(String),
    /// Oracle verification mismatch (exit 3).
    Mismatch(usize),
}

impl CliError {
    fn numeric(e: entvis::Error) -> Self {
        CliError::Numeric(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Param(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Mismatch(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Param(msg) => write!(f, "parameter error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numerical failure: {msg}"),
            CliError::Mismatch(count) => write!(f, "verification failed: {count} check(s)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Entanglement witness sweeps for coupled harmonic oscillators.
///
/// Grid sweeps run data-parallel; set RAYON_NUM_THREADS to control the
/// thread count. Output is deterministic regardless.
#[derive(Debug, Parser)]
#[command(name = "entvis", version, about)]
struct Cli {
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two-particle maximal visibility across a coupling-ratio range.
    BipartiteVisibility(commands::BipartiteVisibility),
    /// Lowest ordinary and fully separable energy levels.
    Spectrum(commands::Spectrum),
    /// Eigenfunction amplitudes on the two-particle position plane.
    WavefunctionGrid(commands::WavefunctionGrid),
    /// Maximal visibility against the particle number.
    VisibilityVsN(commands::VisibilityVsN),
    /// Partial-entanglement visibility across equal-block partitions.
    PartitionScan(commands::PartitionScan),
    /// Visibility at fixed mean particle number (fluctuating N).
    MeanNVisibility(commands::MeanNVisibility),
    /// Thermal-state visibility on a mean-number × temperature grid.
    ThermalGrid(commands::ThermalGrid),
    /// Run the oracle-vs-closed-form verification suite.
    Verify {
        /// Smoke mode: skip the heavy four-particle diagonalizations and
        /// shrink the random scans.
        #[arg(long)]
        fast: bool,
    },
}

fn emit(table: &Table, output: &Option<PathBuf>, format: Format) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match output {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            CliError::Param(format!("cannot open output file {}: {e}", path.display()))
        })?)),
        None => Box::new(std::io::stdout().lock()),
    };
    let result = match format {
        Format::Csv => write_csv(table, &mut sink),
        Format::Json => write_json(table, &mut sink),
    };
    result.and_then(|()| sink.flush()).map_err(|e| CliError::Param(format!("write failed: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let table = match &cli.command {
        Command::BipartiteVisibility(args) => args.run()?,
        Command::Spectrum(args) => args.run()?,
        Command::WavefunctionGrid(args) => args.run()?,
        Command::VisibilityVsN(args) => args.run()?,
        Command::PartitionScan(args) => args.run()?,
        Command::MeanNVisibility(args) => args.run()?,
        Command::ThermalGrid(args) => args.run()?,
        Command::Verify { fast } => {
            let failures = verify::run(*fast)?;
            if failures > 0 {
                return Err(CliError::Mismatch(failures));
            }
            return Ok(());
        }
    };
    emit(&table, &cli.output, cli.format)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion)
                || e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
