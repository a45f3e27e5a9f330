//! Command implementations. Argument problems come back as `UsageError`
//! (exit 2); broken internal invariants panic and are mapped to exit 1 by
//! `main`.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use sievekit::{
    count_rolling_work, expected_pushes, incremental_profile, prime_range_with_budget,
    summarize_profile, Engine, RollingSieve,
};

use crate::output::{write_text, Bitmap};

/// An argument or I/O problem; reported to stderr with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<sievekit::Error> for UsageError {
    fn from(e: sievekit::Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<io::Error> for UsageError {
    fn from(e: io::Error) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Simple,
    Segmented,
    Rolling,
    Atkin,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Simple => Engine::Simple,
            EngineArg::Segmented => Engine::Segmented,
            EngineArg::Rolling => Engine::Rolling,
            EngineArg::Atkin => Engine::Atkin,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    #[default]
    Text,
    Bitmap,
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>, UsageError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            UsageError(format!("cannot write {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Emit all primes in `[start, end]` via the chosen engine.
pub fn cmd_primes(
    start: u64,
    end: u64,
    engine: EngineArg,
    format: FormatArg,
    out: Option<&PathBuf>,
    budget: Option<u64>,
) -> Result<(), UsageError> {
    let stream = prime_range_with_budget(engine.into(), start, end, budget)?;
    let mut w = open_out(out.map(|p| p.as_path()))?;
    match format {
        FormatArg::Text => write_text(stream, &mut w)?,
        FormatArg::Bitmap => {
            let mut bitmap = Bitmap::new(start, end - start + 1);
            for p in stream {
                bitmap.mark(p);
            }
            bitmap.write_to(&mut w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Print the number of primes up to `n`.
pub fn cmd_count(n: u64, engine: EngineArg) -> Result<(), UsageError> {
    if n < 2 {
        return Err(UsageError(format!("n must be at least 2, got {n}")));
    }
    let count = prime_range_with_budget(engine.into(), 2, n, None)?.count();
    println!("{count}");
    Ok(())
}

/// Stream factorizations of every integer in `[start, end]`, one per line.
pub fn cmd_factor(start: u64, end: u64, out: Option<&PathBuf>) -> Result<(), UsageError> {
    if start > end {
        return Err(UsageError(format!(
            "empty range: start {start} exceeds end {end}"
        )));
    }
    let mut sieve = RollingSieve::new(start).map_err(|e| {
        UsageError(format!("factored streaming runs on the rolling engine: {e}"))
    })?;
    let mut w = open_out(out.map(|p| p.as_path()))?;
    while sieve.current() <= end {
        let f = sieve.next_factored();
        writeln!(w, "{f}")?;
    }
    w.flush()?;
    Ok(())
}

/// Run the rolling sieve over `[start, end)` and emit its work-count CSV.
pub fn cmd_bench(start: u64, end: u64, out: Option<&PathBuf>) -> Result<(), UsageError> {
    let report = count_rolling_work(start, end)?;
    let expected = expected_pushes(start, end)?;
    let mut w = open_out(out.map(|p| p.as_path()))?;
    sievekit::instrument::write_bench_csv(&report, expected, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Profile per-gap work of the rolling sieve over `[start, end]` and emit
/// the summary CSV row.
pub fn cmd_profile(start: u64, end: u64, out: Option<&PathBuf>) -> Result<(), UsageError> {
    let gaps = incremental_profile(start, end)?;
    let summary = summarize_profile(start, end, &gaps);
    let mut w = open_out(out.map(|p| p.as_path()))?;
    sievekit::instrument::write_profile_csv(&summary, &mut w)?;
    w.flush()?;
    Ok(())
}
