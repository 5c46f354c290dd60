//! `lmmroot`: regenerates the rate tables, the open-start benchmark, the
//! pathological transcripts and the bracketing benchmark.
//!
//! Exit codes: 0 all checks pass, 1 numeric mismatch, 2 solver failure,
//! 3 bad arguments.

mod commands;
mod render;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use render::Format;

const BAD_ARGUMENTS: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "lmmroot", version, about = "Multistep root-finder benchmarks")]
struct Cli {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Predicted convergence rates against the published tables.
    Rates {
        #[arg(long, default_value_t = 5)]
        smax: usize,
        #[arg(long, default_value_t = 4)]
        dmax: u32,
    },
    /// Newton and full multistep runs on the corpus in extended precision.
    Bench {
        #[arg(long, default_value_t = 300)]
        digits: u32,
        #[arg(long, default_value_t = 250)]
        eta: u32,
    },
    /// Iterate histories for tanh and cbrt(x) exp(-x^2) in double precision.
    Pathology,
    /// The bracketing solver on the corpus brackets.
    Robust {
        /// Relative tolerance, or `auto` for twice the machine epsilon.
        #[arg(long, default_value = "auto")]
        delta: String,
        /// Extra random polynomial brackets to check for termination.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
}

fn parse_delta(s: &str) -> Result<f64, String> {
    if s == "auto" {
        return Ok(2.0 * f64::EPSILON);
    }
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!(
            "invalid --delta '{s}': expected 'auto' or a positive number"
        )),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => BAD_ARGUMENTS,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let (table, checks) = match cli.command {
        Command::Rates { smax, dmax } => {
            if smax < 2 {
                eprintln!("--smax must be at least 2");
                return ExitCode::from(BAD_ARGUMENTS);
            }
            commands::rates(smax, dmax)
        }
        Command::Bench { digits, eta } => {
            if digits < 50 {
                eprintln!("--digits must be at least 50");
                return ExitCode::from(BAD_ARGUMENTS);
            }
            commands::bench(digits, eta)
        }
        Command::Pathology => commands::pathology(),
        Command::Robust { delta, random } => match parse_delta(&delta) {
            Ok(d) => commands::robust(d, random, cli.seed),
            Err(msg) => {
                eprintln!("{msg}");
                return ExitCode::from(BAD_ARGUMENTS);
            }
        },
    };

    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            table.write(cli.format, &mut w)?;
            w.flush()
        }),
        None => table.write(cli.format, &mut io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(2);
    }

    for m in &checks.mismatches {
        eprintln!("mismatch: {m}");
    }
    for f in &checks.failures {
        eprintln!("failure: {f}");
    }
    ExitCode::from(checks.exit_code())
}
