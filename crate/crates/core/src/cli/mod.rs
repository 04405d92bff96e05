//! Batch front end: `design`, `analyze`, `ambiguity`, `compare` and `oracle`.
//!
//! Every subcommand reads an optional JSON [`ExperimentConfig`] and applies command-line
//! flags on top. Outputs are sequence files, JSON reports and CSV plot data in `--out`.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::Result;

pub use commands::{
    cmd_ambiguity, cmd_analyze, cmd_compare, cmd_design, cmd_oracle, delay_grid, doppler_grid,
    select_best_seed, AmbiguityPeaks, ORACLE_TOLERANCE, CompareRow, DesignSummary, OracleOutcome, SeedOutcome,
};
pub use config::{ExperimentConfig, Overrides};
pub use output::{
    format_db, format_linear, format_report_table, read_trace_csv, write_ambiguity_csv,
    write_correlation_csv, write_json, write_trace_csv,
};

#[derive(Parser, Debug)]
#[command(name = "dfcw", version, about = "Orthogonal DFCW set design for MIMO radar")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Search for low-sidelobe coding sets with the accelerated swarm
    Design {
        /// Sequence file placed in the initial swarm
        #[arg(long, value_name = "FILE")]
        warm_start: Option<PathBuf>,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Score an existing sequence file and dump its correlation functions
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Delay-Doppler grids and the matched-filter peak under Doppler
    Ambiguity {
        file: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Accelerated swarm vs plain PSO vs GA at a shared evaluation budget
    Compare {
        #[command(flatten)]
        opts: Overrides,
    },
    /// Exhaustive optimum of a small instance and the swarm's hit rate
    Oracle {
        #[command(flatten)]
        opts: Overrides,
    },
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not failures.
            let failed = e.use_stderr();
            let _ = e.print();
            return if failed {
                Err(crate::Error::InvalidParameter("invalid command line".into()))
            } else {
                Ok(())
            };
        }
    };
    match cli.command {
        Command::Design { warm_start, opts } => {
            cmd_design(&opts.resolve()?, warm_start.as_deref())?;
        }
        Command::Analyze { file, opts } => {
            let config = opts.resolve()?;
            cmd_analyze(&file, &config, opts.explicit_shape(&config))?;
        }
        Command::Ambiguity { file, opts } => {
            let config = opts.resolve()?;
            cmd_ambiguity(&file, &config, opts.explicit_shape(&config))?;
        }
        Command::Compare { opts } => {
            cmd_compare(&opts.resolve()?)?;
        }
        Command::Oracle { opts } => {
            cmd_oracle(&opts.resolve()?)?;
        }
    }
    Ok(())
}

/// Process entry point: exit status 0 iff every artifact was written.
pub fn main() -> ExitCode {
    match run(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
