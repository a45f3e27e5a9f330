use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sievekit_cli::{
    cmd_bench, cmd_count, cmd_factor, cmd_primes, cmd_profile, EngineArg, FormatArg, UsageError,
};

/// Prime sieves, factorization streaming and work-unit measurements.
#[derive(Parser)]
#[command(name = "sievekit", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit all primes in [start, end]
    Primes {
        start: u64,
        end: u64,
        /// Sieve implementation to run
        #[arg(long, value_enum, default_value_t = EngineArg::Rolling)]
        engine: EngineArg,
        /// Output encoding
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
        /// Write to this file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-call work budget override for the atkin engine
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Print the number of primes up to n
    Count {
        n: u64,
        #[arg(long, value_enum, default_value_t = EngineArg::Simple)]
        engine: EngineArg,
    },
    /// Stream full factorizations of [start, end] (rolling engine, start >= 100)
    Factor {
        start: u64,
        end: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV work-count report for a rolling-sieve run over [start, end)
    Bench {
        #[arg(long, default_value_t = 100)]
        start: u64,
        #[arg(long)]
        end: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV per-gap cost summary for the rolling sieve over [start, end]
    Profile {
        #[arg(long)]
        start: u64,
        #[arg(long)]
        end: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run() -> Result<(), UsageError> {
    match Cli::parse().cmd {
        Cmd::Primes {
            start,
            end,
            engine,
            format,
            out,
            budget,
        } => cmd_primes(start, end, engine, format, out.as_ref(), budget),
        Cmd::Count { n, engine } => cmd_count(n, engine),
        Cmd::Factor { start, end, out } => cmd_factor(start, end, out.as_ref()),
        Cmd::Bench { start, end, out } => cmd_bench(start, end, out.as_ref()),
        Cmd::Profile { start, end, out } => cmd_profile(start, end, out.as_ref()),
    }
}

fn main() -> ExitCode {
    // A tripped invariant (a bug, not a usage problem) panics; report it as
    // exit 1, distinct from the argument-error exit 2.
    match std::panic::catch_unwind(run) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(_) => {
            eprintln!("internal invariant violation");
            ExitCode::from(1)
        }
    }
}
