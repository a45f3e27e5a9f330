//! Uniform prime streaming across the four engines.
//!
//! The incremental engines start their machinery at 100; the hard-coded
//! prelude fronts them so every engine accepts any range from 2 upward and
//! they all emit identical streams.

use std::str::FromStr;

use crate::baseline::{segmented_sieve, simple_sieve, PrimalityTable, SegmentedPrimes};
use crate::error::{Error, Result};
use crate::incremental::IncrementalSieve;
use crate::rolling::{RollingSieve, MIN_START, PRELUDE_PRIMES};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Whole-range bit-vector sieve.
    Simple,
    /// Segmented sieve with sqrt-sized windows.
    Segmented,
    /// Rolling sieve over the circular array of stacks.
    Rolling,
    /// Two-interval incremental wrapper over the quadratic-form engine.
    Atkin,
}

impl Engine {
    pub const ALL: [Engine; 4] = [
        Engine::Simple,
        Engine::Segmented,
        Engine::Rolling,
        Engine::Atkin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Simple => "simple",
            Engine::Segmented => "segmented",
            Engine::Rolling => "rolling",
            Engine::Atkin => "atkin",
        }
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "simple" => Ok(Engine::Simple),
            "segmented" => Ok(Engine::Segmented),
            "rolling" => Ok(Engine::Rolling),
            "atkin" => Ok(Engine::Atkin),
            other => Err(format!(
                "unknown engine '{other}' (expected simple, segmented, rolling or atkin)"
            )),
        }
    }
}

/// Ascending primes in `[start, end]` from the chosen engine.
pub struct PrimeRange {
    end: u64,
    done: bool,
    inner: Inner,
}

enum Inner {
    Table {
        table: PrimalityTable,
        v: u64,
    },
    Segmented {
        it: SegmentedPrimes,
        start: u64,
    },
    Rolling {
        prelude_idx: usize,
        engine_start: u64,
        sieve: Option<Box<RollingSieve>>,
    },
    Atkin {
        prelude_idx: usize,
        engine_start: u64,
        budget: Option<u64>,
        sieve: Option<Box<IncrementalSieve>>,
    },
}

/// Stream the primes in `[start, end]` via `engine`. `start` must be at
/// least 2 and no greater than `end`.
pub fn prime_range(engine: Engine, start: u64, end: u64) -> Result<PrimeRange> {
    prime_range_with_budget(engine, start, end, None)
}

/// `prime_range` with an explicit per-call budget override for the
/// incremental wrapper; ignored by the other engines.
pub fn prime_range_with_budget(
    engine: Engine,
    start: u64,
    end: u64,
    budget: Option<u64>,
) -> Result<PrimeRange> {
    if start < 2 || start > end {
        return Err(Error::InvalidSegment {
            left: start,
            right: end,
        });
    }
    let prelude_idx = PRELUDE_PRIMES.partition_point(|&p| p < start);
    let inner = match engine {
        Engine::Simple => Inner::Table {
            table: simple_sieve(end)?,
            v: start,
        },
        // The segmented machinery wants n >= 4; a range that small is served
        // from the plain table.
        Engine::Segmented if end < 4 => Inner::Table {
            table: simple_sieve(end)?,
            v: start,
        },
        Engine::Segmented => Inner::Segmented {
            it: segmented_sieve(end, end.isqrt())?,
            start,
        },
        Engine::Rolling => Inner::Rolling {
            prelude_idx,
            engine_start: start.max(MIN_START),
            sieve: None,
        },
        Engine::Atkin => {
            // The wrapper keeps an in-progress interval ahead of the
            // queries; leave it room below the quadratic-form ceiling.
            let headroom = 3 * (crate::atkin::MAX_HI.isqrt() + 2);
            if end > crate::atkin::MAX_HI - headroom {
                return Err(Error::IntervalOutOfRange {
                    lo: start,
                    delta: end - start + 1,
                });
            }
            Inner::Atkin {
                prelude_idx,
                engine_start: start.max(MIN_START),
                budget,
                sieve: None,
            }
        }
    };
    Ok(PrimeRange {
        end,
        done: false,
        inner,
    })
}

impl Iterator for PrimeRange {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let candidate = match &mut self.inner {
            Inner::Table { table, v } => {
                while *v <= self.end && !table.is_prime(*v) {
                    *v += 1;
                }
                let p = (*v <= self.end).then_some(*v);
                *v += 1;
                p
            }
            Inner::Segmented { it, start } => {
                let mut p = it.next();
                while let Some(q) = p {
                    if q >= *start {
                        break;
                    }
                    p = it.next();
                }
                p
            }
            Inner::Rolling {
                prelude_idx,
                engine_start,
                sieve,
            } => {
                if *prelude_idx < PRELUDE_PRIMES.len() {
                    let p = PRELUDE_PRIMES[*prelude_idx];
                    *prelude_idx += 1;
                    Some(p)
                } else {
                    let s = match sieve {
                        Some(s) => s,
                        None => sieve.insert(Box::new(
                            RollingSieve::new(*engine_start)
                                .expect("engine start is within bounds"),
                        )),
                    };
                    Some(s.next_prime())
                }
            }
            Inner::Atkin {
                prelude_idx,
                engine_start,
                budget,
                sieve,
            } => {
                if *prelude_idx < PRELUDE_PRIMES.len() {
                    let p = PRELUDE_PRIMES[*prelude_idx];
                    *prelude_idx += 1;
                    Some(p)
                } else {
                    let s = match sieve {
                        Some(s) => s,
                        None => {
                            let built = match budget {
                                Some(b) => IncrementalSieve::with_budget(*engine_start, *b),
                                None => IncrementalSieve::new(*engine_start),
                            };
                            sieve.insert(Box::new(built.expect("engine start is within bounds")))
                        }
                    };
                    Some(s.next_prime())
                }
            }
        };
        match candidate {
            Some(p) if p <= self.end => Some(p),
            _ => {
                self.done = true;
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::trial_division_is_prime;

    fn collect(engine: Engine, start: u64, end: u64) -> Vec<u64> {
        prime_range(engine, start, end).unwrap().collect()
    }

    #[test]
    fn engines_agree_on_a_small_range() {
        let expect: Vec<u64> = vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
        for engine in Engine::ALL {
            assert_eq!(collect(engine, 2, 30), expect, "engine {}", engine.name());
        }
    }

    #[test]
    fn engines_agree_across_the_prelude_boundary() {
        for (start, end) in [(2u64, 99u64), (90, 110), (97, 101), (100, 200), (2, 2), (89, 89)] {
            let oracle: Vec<u64> = (start..=end).filter(|&m| trial_division_is_prime(m)).collect();
            for engine in Engine::ALL {
                assert_eq!(
                    collect(engine, start, end),
                    oracle,
                    "engine {} on [{start}, {end}]",
                    engine.name()
                );
            }
        }
    }

    #[test]
    fn engines_agree_on_offset_ranges() {
        for (start, end) in [(1000u64, 2000u64), (9973, 9973), (10_000, 10_100)] {
            let oracle: Vec<u64> = (start..=end).filter(|&m| trial_division_is_prime(m)).collect();
            for engine in Engine::ALL {
                assert_eq!(
                    collect(engine, start, end),
                    oracle,
                    "engine {} on [{start}, {end}]",
                    engine.name()
                );
            }
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        for engine in Engine::ALL {
            assert!(prime_range(engine, 1, 10).is_err());
            assert!(prime_range(engine, 30, 2).is_err());
        }
    }

    #[test]
    fn atkin_engine_rejects_ranges_near_the_form_ceiling() {
        assert!(prime_range(Engine::Atkin, 2, crate::atkin::MAX_HI).is_err());
        assert!(prime_range(Engine::Rolling, 2, crate::atkin::MAX_HI).is_ok());
    }

    #[test]
    fn engine_names_round_trip() {
        for engine in Engine::ALL {
            assert_eq!(engine.name().parse::<Engine>().unwrap(), engine);
        }
        assert!("fast".parse::<Engine>().is_err());
    }

    #[test]
    fn count_pi_of_two() {
        for engine in Engine::ALL {
            assert_eq!(prime_range(engine, 2, 2).unwrap().count(), 1);
        }
    }
}
