//! Prime sieves in three complementary shapes, plus the instrumentation to
//! measure what they cost.
//!
//! * [`baseline`] — trial division, the textbook bit-vector sieve and a
//!   segmented sieve; the oracles everything else is checked against.
//! * [`rolling`] — an incremental sieve over a circular array of stacks that
//!   classifies successive integers and can emit them fully factored.
//! * [`atkin`] — a segmented quadratic-form sieve that can be paused and
//!   resumed under a work budget.
//! * [`incremental`] — two consecutive intervals (one ready, one in
//!   progress) giving O(1) queries with a constant per-call sieving budget.
//! * [`instrument`] — exact work-unit counting and the number-theoretic
//!   sanity checks behind the performance claims.
//! * [`stream`] — one interface over the four engines, fronted by the
//!   hard-coded primes below 100.

pub mod atkin;
pub mod baseline;
pub mod bits;
pub mod error;
pub mod incremental;
pub mod instrument;
pub mod rolling;
pub mod stream;

pub use atkin::{atkin_segment_primes, PendingInterval, Phase, ReadyInterval, StepOutcome};
pub use baseline::{
    base_primes, segmented_sieve, sieve_segment, simple_sieve, trial_division_is_prime,
    PrimalityTable, PrimeList, SegmentBuffer,
};
pub use bits::BitVec;
pub use error::{Error, Result};
pub use incremental::IncrementalSieve;
pub use instrument::{
    chebyshev_check, count_rolling_work, expected_pushes, incremental_profile, mertens_check,
    pnt_check, summarize_profile, GapCost, ProfileSummary, RollingWorkReport, WorkMeter,
};
pub use rolling::{FactoredInteger, RollingPrimes, RollingSieve, PRELUDE_PRIMES};
pub use stream::{prime_range, prime_range_with_budget, Engine, PrimeRange};
