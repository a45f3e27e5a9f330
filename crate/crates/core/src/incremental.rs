//! A compact incremental prime generator built from two consecutive
//! intervals: one fully sieved and answering queries in O(1), one being
//! sieved by the budgeted quadratic-form engine a few work units per call.
//!
//! The budget is calibrated so the in-progress interval finishes no later
//! than the ready one is exhausted; that load-balancing invariant is
//! asserted at every swap and never silently absorbed, because a violation
//! would falsify the budget constant rather than some input.
//!
//! `next_prime` charges work in proportion to the distance jumped, scaled
//! down by floor(ln ln n); since the underlying engine spends on the order
//! of one unit per sieved value, the per-call budget B carries that same
//! factor so a pure `next_prime` workload still banks twice the measured
//! interval cost by swap time.

use crate::atkin::{ensure_base, PendingInterval, ReadyInterval};
use crate::baseline::{base_primes, PrimeList};
use crate::error::{Error, Result};
use crate::instrument::WorkMeter;
use crate::rolling::MIN_START;

/// Two-interval incremental sieve. Single-owner; all sieving happens inside
/// the caller's own calls, so per-call cost is directly measurable.
#[derive(Clone, Debug)]
pub struct IncrementalSieve {
    /// Fully sieved interval containing `n`.
    ready: ReadyInterval,
    /// The following interval, in progress.
    pending: PendingInterval,
    /// Base primes shared across intervals; grown at swaps.
    base: PrimeList,
    /// Next query point; always inside `ready`.
    n: u64,
    /// Work units invested per `next()` call (B).
    budget: u64,
    /// Work units per unit of gap length in `next_prime()` (B'), kept as a
    /// scale factor `B / max(1, floor(ln ln n))`.
    gap_scale: f64,
    budget_override: Option<u64>,
    swaps: u64,
    max_call_units: u64,
    budget_violations: u64,
    /// Unit accounting across all intervals, setup work included.
    meter: WorkMeter,
}

impl IncrementalSieve {
    /// Sieve `[start, start + isqrt(start) + 2)` synchronously, measure its
    /// cost to calibrate the per-call budget, and start the next interval.
    pub fn new(start: u64) -> Result<Self> {
        Self::build(start, None)
    }

    /// Same, but with a fixed per-call budget instead of the calibrated one.
    /// A budget too small to keep up is detected at the first swap.
    pub fn with_budget(start: u64, budget: u64) -> Result<Self> {
        Self::build(start, Some(budget))
    }

    fn build(start: u64, budget_override: Option<u64>) -> Result<Self> {
        if start < MIN_START {
            return Err(Error::StartTooSmall {
                got: start,
                min: MIN_START,
            });
        }
        let delta = start.isqrt() + 2;
        let mut first = PendingInterval::new(start, delta)?;
        let mut base = base_primes((start + delta - 1).isqrt());
        first.step(u64::MAX, &mut base);
        let first_units = first.spent();
        let mut meter = WorkMeter::new();
        meter.add_lattice_visits(first.lattice_visits());
        meter.add_crossings(first.crossings());
        let ready = first.finish().expect("ran to completion");

        let next_lo = start + delta;
        let next_delta = next_lo.isqrt() + 2;
        let mut pending = PendingInterval::new(next_lo, next_delta)?;
        let setup = ensure_base(&mut base, (next_lo + next_delta - 1).isqrt());
        pending.charge_crossings(setup);
        meter.add_crossings(setup);

        let budget =
            budget_override.unwrap_or((2 * first_units).div_ceil(delta) * lnln_floor(start) + 1);
        let mut state = IncrementalSieve {
            ready,
            pending,
            base,
            n: start,
            budget,
            gap_scale: 0.0,
            budget_override,
            swaps: 0,
            max_call_units: 0,
            budget_violations: 0,
            meter,
        };
        state.recompute_gap_scale();
        Ok(state)
    }

    /// The value the next `next()` call will classify.
    pub fn current(&self) -> u64 {
        self.n
    }

    /// Current per-call budget B.
    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn swap_count(&self) -> u64 {
        self.swaps
    }

    /// Largest unit count any single budgeted step has performed.
    pub fn max_call_units(&self) -> u64 {
        self.max_call_units
    }

    /// Times a step used more than the budget it was given; always zero.
    pub fn budget_violations(&self) -> u64 {
        self.budget_violations
    }

    /// Cumulative work units across all intervals, setup included.
    pub fn total_units(&self) -> u64 {
        self.meter.total()
    }

    /// Unit breakdown (lattice visits vs crossings) and recent call costs.
    pub fn meter(&self) -> &WorkMeter {
        &self.meter
    }

    /// Live words: both intervals, the base primes and the fixed fields.
    pub fn memory_words(&self) -> u64 {
        self.ready.memory_words() + self.pending.memory_words() + self.base.len() as u64 + 8
    }

    pub fn ready_interval(&self) -> &ReadyInterval {
        &self.ready
    }

    /// Answer primality of the current value from the ready interval, then
    /// invest the per-call budget in the pending one.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> bool {
        let answer = self.ready.is_prime(self.n);
        self.n += 1;
        self.step_pending(self.budget);
        self.maybe_swap();
        answer
    }

    /// Jump to the smallest prime at or after the current value using the
    /// ready interval's prime list, investing work proportional to the
    /// distance travelled. Interleaving with `next()` is supported; the read
    /// cursor only moves forward.
    pub fn next_prime(&mut self) -> u64 {
        loop {
            if let Some(p) = self.ready.next_prime_at_or_after(self.n) {
                let gap = p - self.n;
                self.n = p + 1;
                self.step_pending(self.gap_budget(gap));
                self.maybe_swap();
                return p;
            }
            // No prime left in the ready interval: consume the remainder and
            // keep looking in the next one.
            let gap = self.ready.end() - self.n;
            self.n = self.ready.end();
            self.step_pending(self.gap_budget(gap));
            self.maybe_swap();
        }
    }

    fn gap_budget(&self, gap: u64) -> u64 {
        ((gap as f64 * self.gap_scale).ceil() as u64).max(1)
    }

    fn recompute_gap_scale(&mut self) {
        self.gap_scale = self.budget as f64 / lnln_floor(self.n) as f64;
    }

    fn step_pending(&mut self, budget: u64) {
        if self.pending.is_done() {
            return;
        }
        let (v0, c0) = (self.pending.lattice_visits(), self.pending.crossings());
        let out = self.pending.step(budget, &mut self.base);
        self.meter.add_lattice_visits(self.pending.lattice_visits() - v0);
        self.meter.add_crossings(self.pending.crossings() - c0);
        self.meter.record_call_cost(out.used);
        self.max_call_units = self.max_call_units.max(out.used);
        if out.used > budget {
            self.budget_violations += 1;
        }
    }

    fn maybe_swap(&mut self) {
        if self.n < self.ready.end() {
            return;
        }
        assert!(
            self.pending.is_done(),
            "load-balancing invariant violated: interval [{}, {}) is unfinished (phase {:?}, \
             {} units in) although [{}, {}) is exhausted; per-call budget {} was too small",
            self.pending.lo(),
            self.pending.lo() + self.pending.delta(),
            self.pending.phase(),
            self.pending.spent(),
            self.ready.lo(),
            self.ready.end(),
            self.budget,
        );
        let prev_delta = self.pending.delta();
        let prev_units = self.pending.spent();

        let next_lo = self.pending.lo() + prev_delta;
        let next_delta = self.n.isqrt() + 2;
        let next = PendingInterval::new(next_lo, next_delta).unwrap_or_else(|e| {
            panic!("cannot start interval at {next_lo}: {e}");
        });
        let finished = std::mem::replace(&mut self.pending, next);
        self.ready = finished.finish().expect("asserted done above");
        self.swaps += 1;
        debug_assert_eq!(self.pending.lo(), self.ready.end(), "intervals must stay consecutive");

        // Recalibrate from the interval just measured, then pre-grow the
        // base primes for the new interval, charging the work to it. Swap
        // calls are where setup work is allowed to exceed the per-call
        // budget.
        self.budget = self
            .budget_override
            .unwrap_or((2 * prev_units).div_ceil(prev_delta) * lnln_floor(self.n) + 1);
        self.recompute_gap_scale();
        let setup = ensure_base(&mut self.base, (next_lo + next_delta - 1).isqrt());
        self.pending.charge_crossings(setup);
        self.meter.add_crossings(setup);
    }
}

fn lnln_floor(n: u64) -> u64 {
    (n as f64).ln().ln().floor().max(1.0) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::trial_division_is_prime;
    use crate::rolling::RollingSieve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn construction_geometry() {
        let sieve = IncrementalSieve::new(100).unwrap();
        assert_eq!(sieve.ready_interval().lo(), 100);
        assert_eq!(sieve.ready_interval().end(), 112); // isqrt(100) + 2 = 12 wide
        assert_eq!(sieve.current(), 100);

        let sieve = IncrementalSieve::new(1_000_000).unwrap();
        assert_eq!(sieve.ready_interval().delta(), 1002);
    }

    #[test]
    fn rejects_small_start() {
        assert!(matches!(
            IncrementalSieve::new(99),
            Err(Error::StartTooSmall { .. })
        ));
    }

    #[test]
    fn first_answer_is_composite_100() {
        let mut sieve = IncrementalSieve::new(100).unwrap();
        assert!(!sieve.next());
        assert!(sieve.next()); // 101
    }

    #[test]
    fn matches_trial_division_and_rolling_across_swaps() {
        let mut sieve = IncrementalSieve::new(100).unwrap();
        let mut rolling = RollingSieve::new(100).unwrap();
        for m in 100..100_100u64 {
            let answer = sieve.next();
            assert_eq!(answer, rolling.next(), "m = {m}");
            if m < 30_000 {
                assert_eq!(answer, trial_division_is_prime(m), "m = {m}");
            }
        }
        assert!(sieve.swap_count() > 0);
        assert_eq!(sieve.budget_violations(), 0);
    }

    #[test]
    fn matches_rolling_sieve_from_one_million() {
        let mut wrapper = IncrementalSieve::new(1_000_000).unwrap();
        let mut rolling = RollingSieve::new(1_000_000).unwrap();
        for _ in 0..10_000 {
            assert_eq!(wrapper.next(), rolling.next());
        }
    }

    #[test]
    fn next_prime_examples() {
        let mut sieve = IncrementalSieve::new(100).unwrap();
        assert_eq!(sieve.next_prime(), 101);
        assert_eq!(sieve.next_prime(), 103);

        // 113 -> 127 spans several swaps at this interval width.
        let mut sieve = IncrementalSieve::new(114).unwrap();
        assert_eq!(sieve.next_prime(), 127);
    }

    #[test]
    fn next_prime_matches_rolling_at_random_positions() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
        for _ in 0..1000 {
            let v = rng.random_range(100..1_000_000u64);
            let mut wrapper = IncrementalSieve::new(v).unwrap();
            let mut rolling = RollingSieve::new(v).unwrap();
            assert_eq!(wrapper.next_prime(), rolling.next_prime(), "from {v}");
        }
    }

    #[test]
    fn interleaved_calls_stay_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD1CE);
        let mut wrapper = IncrementalSieve::new(100).unwrap();
        let mut rolling = RollingSieve::new(100).unwrap();
        for _ in 0..5000 {
            if rng.random_bool(0.5) {
                assert_eq!(wrapper.next(), rolling.next());
            } else {
                assert_eq!(wrapper.next_prime(), rolling.next_prime());
            }
            assert_eq!(wrapper.current(), rolling.current());
        }
    }

    #[test]
    fn per_call_work_is_bounded_by_budget() {
        let mut sieve = IncrementalSieve::new(10_000).unwrap();
        let mut max_budget = sieve.budget();
        for _ in 0..50_000 {
            sieve.next();
            max_budget = max_budget.max(sieve.budget());
        }
        assert_eq!(sieve.budget_violations(), 0);
        assert!(sieve.max_call_units() <= max_budget);
    }

    #[test]
    fn oversized_budget_override_works() {
        let mut sieve = IncrementalSieve::with_budget(100, 1_000_000).unwrap();
        for m in 100..1000u64 {
            assert_eq!(sieve.next(), trial_division_is_prime(m));
        }
    }

    #[test]
    fn starved_budget_trips_the_swap_assertion() {
        let result = std::panic::catch_unwind(|| {
            let mut sieve = IncrementalSieve::with_budget(10_000, 1).unwrap();
            for _ in 0..200 {
                sieve.next();
            }
        });
        let err = result.expect_err("one unit per call cannot finish an interval in time");
        let msg = err
            .downcast_ref::<String>()
            .cloned()
            .unwrap_or_default();
        assert!(
            msg.contains("load-balancing invariant violated"),
            "unexpected panic message: {msg}"
        );
    }

    #[test]
    fn memory_stays_near_sqrt_n() {
        let mut sieve = IncrementalSieve::new(100).unwrap();
        while sieve.current() < 500_000 {
            sieve.next_prime();
        }
        let words = sieve.memory_words() as f64;
        let sqrt_n = (sieve.current() as f64).sqrt();
        assert!(
            words < 16.0 * sqrt_n,
            "live words {words} should be within a small multiple of sqrt(n) = {sqrt_n}"
        );
    }
}
