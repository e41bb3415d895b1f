//! Command-line front end: config ingestion, figure presets, CSV/JSON output
//! and the verify suite.
//!
//! Exit codes: 0 success, 1 validation failure, 2 i/o failure,
//! 3 verification failure.

pub mod commands;
pub mod config;
pub mod figures;
pub mod output;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::rates::RateMethod;
use config::{parse_preparation, parse_statistics, Overrides};
use figures::FigurePreset;

const PRECEDENCE_HELP: &str = "Precedence: command-line flags override config-file fields, \
which override built-in defaults. The fully resolved configuration is embedded in every \
output file. ZENO_RING_THREADS (positive integer) caps grid parallelism.";

#[derive(Parser, Debug)]
#[command(
    name = "zeno-ring",
    version,
    about = "Measurement-modified tunneling rates on a flux-threaded ring",
    after_help = PRECEDENCE_HELP
)]
struct CliArgs {
    /// JSON config file; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Ring half-size N (the ring has 2N sites)
    #[arg(long, global = true)]
    half_count: Option<usize>,

    /// Hopping amplitude J
    #[arg(long, global = true)]
    hopping: Option<f64>,

    /// Dot-ring coupling g
    #[arg(long, global = true)]
    coupling: Option<f64>,

    /// Dot on-site energy omega_A
    #[arg(long, global = true)]
    onsite: Option<f64>,

    /// Dimensionless flux phi
    #[arg(long, global = true)]
    flux: Option<f64>,

    /// Particle statistics: fermion | boson
    #[arg(long, global = true)]
    statistics: Option<String>,

    /// Measurement interval tau
    #[arg(long, global = true)]
    tau: Option<f64>,

    /// Number of measurements M
    #[arg(long, global = true)]
    repetitions: Option<usize>,

    /// Initial state: fermion | fock:N | coherent:RE,IM
    #[arg(long, global = true)]
    preparation: Option<String>,

    /// Comma-separated rate methods (e.g. time_integral,paper_sinc)
    #[arg(long, global = true, value_delimiter = ',')]
    methods: Option<Vec<String>>,

    /// Output file path
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format: csv | json
    #[arg(long, global = true)]
    format: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Survival-probability series under repeated projective measurement
    Evolve,
    /// Decay-rate table, one row per requested method
    Rate,
    /// Built-in phase-map preset: fig2 | fig3a | fig3b | fig4 | fig5
    Figure {
        preset: String,
        /// Directory for the data file and its metadata sidecar
        #[arg(long, default_value = "")]
        output_dir: String,
    },
    /// Phase map over the two axes in the config sweep section
    Sweep,
    /// Run the full consistency suite and write the discrepancy report
    Verify,
}

fn overrides_from(args: &CliArgs) -> Result<Overrides, Error> {
    let mut overrides = Overrides {
        half_count: args.half_count,
        hopping: args.hopping,
        coupling: args.coupling,
        onsite: args.onsite,
        flux: args.flux,
        tau: args.tau,
        repetitions: args.repetitions,
        output: args
            .output
            .as_ref()
            .map(|p| p.to_string_lossy().into_owned()),
        ..Overrides::default()
    };
    if let Some(s) = &args.statistics {
        overrides.statistics = Some(parse_statistics(s)?);
    }
    if let Some(s) = &args.preparation {
        overrides.preparation = Some(parse_preparation(s)?);
    }
    if let Some(methods) = &args.methods {
        let parsed: Result<Vec<RateMethod>, Error> = methods.iter().map(|m| m.parse()).collect();
        overrides.methods = Some(parsed?);
    }
    if let Some(f) = &args.format {
        overrides.format = Some(f.parse()?);
    }
    Ok(overrides)
}

/// Parses arguments, runs the selected command and maps failures onto the
/// documented exit codes.
pub fn main_entry() -> std::process::ExitCode {
    let args = match CliArgs::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // clap help/version output is success, anything else is validation
            if e.use_stderr() {
                eprintln!("{e}");
                return std::process::ExitCode::from(1);
            }
            print!("{e}");
            return std::process::ExitCode::SUCCESS;
        }
    };
    match run(args) {
        Ok(code) => std::process::ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Io(_) => 2,
                _ => 1,
            };
            std::process::ExitCode::from(code)
        }
    }
}

fn run(args: CliArgs) -> Result<u8, Error> {
    let overrides = overrides_from(&args)?;
    let file = match &args.config {
        Some(path) => Some(config::load_file(path)?),
        None => None,
    };

    match &args.command {
        Command::Evolve => {
            let config = config::resolve(file, &overrides, "evolve.csv")?;
            commands::cmd_evolve(&config)?;
            Ok(0)
        }
        Command::Rate => {
            let config = config::resolve(file, &overrides, "rate.csv")?;
            commands::cmd_rate(&config)?;
            Ok(0)
        }
        Command::Figure { preset, output_dir } => {
            let preset: FigurePreset = preset.parse()?;
            commands::cmd_figure(preset, output_dir)?;
            Ok(0)
        }
        Command::Sweep => {
            let config = config::resolve(file, &overrides, "sweep.csv")?;
            commands::cmd_sweep(&config)?;
            Ok(0)
        }
        Command::Verify => {
            let config = config::resolve(file, &overrides, "verify_report.csv")?;
            let all_passed = commands::cmd_verify(&config)?;
            Ok(if all_passed { 0 } else { 3 })
        }
    }
}
