//! Batch front end for the degenerate-Raman transfer simulator.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 regime violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use raman_qit_cli::commands::{cmd_run, cmd_sweep, cmd_validate};

#[derive(Parser)]
#[command(
    name = "raman-qit",
    about = "Simulate the transfer of a one-qubit atomic state into a \
             coherent-state-encoded optical field",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one protocol run; header + CSV row on stdout.
    Run {
        /// Flat key-value config file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Sweep one parameter and write a CSV file, one row per grid point.
    Sweep {
        /// Flat key-value config file with the fixed base parameters.
        #[arg(long)]
        config: PathBuf,
        /// Swept parameter: alpha_abs, delta or time.
        #[arg(long)]
        param: String,
        /// First grid value (inclusive).
        #[arg(long)]
        start: f64,
        /// Last grid value (inclusive).
        #[arg(long)]
        stop: f64,
        /// Number of grid points (>= 2).
        #[arg(long)]
        steps: usize,
        /// Output CSV path (written atomically).
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare effective against full-model populations on a time grid.
    Validate {
        /// Flat key-value config file.
        #[arg(long)]
        config: PathBuf,
        /// End of the time grid.
        #[arg(long)]
        tmax: f64,
        /// Number of grid points (>= 2).
        #[arg(long)]
        samples: usize,
        /// Output CSV path (written atomically).
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    let result = match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Sweep {
            config,
            param,
            start,
            stop,
            steps,
            out,
        } => cmd_sweep(&config, &param, start, stop, steps, &out),
        Command::Validate {
            config,
            tmax,
            samples,
            out,
        } => cmd_validate(&config, tmax, samples, &out),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
