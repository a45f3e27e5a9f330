//! Reference sieves: trial division, the classic bit-vector sieve, and a
//! segmented sieve over fixed windows.
//!
//! These double as standalone functionality and as the correctness oracles
//! for the incremental sieves. `trial_division_is_prime` is the root oracle
//! and is deliberately the dumbest possible implementation.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::instrument::WorkMeter;

/// True iff `m >= 2` and no `d` with `2 <= d <= sqrt(m)` divides `m`.
pub fn trial_division_is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primality of every integer in `0..=limit`, one bit per integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalityTable {
    limit: u64,
    bits: BitVec,
}

impl PrimalityTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primality of `m`, which must not exceed the limit.
    pub fn is_prime(&self, m: u64) -> bool {
        self.bits.get(m as usize)
    }

    /// Number of primes up to the limit.
    pub fn count(&self) -> u64 {
        self.bits.count_ones() as u64
    }

    pub fn iter_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter_ones().map(|i| i as u64)
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }
}

/// All primes up to `limit`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeList {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeList {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Used by the lazy base-prime extension in the quadratic-form sieve;
    /// `p` must be the next prime above the current limit.
    pub(crate) fn push_extended(&mut self, p: u64) {
        debug_assert!(p > self.limit);
        debug_assert!(self.primes.last().is_none_or(|&last| last < p));
        self.primes.push(p);
    }

    pub(crate) fn set_limit(&mut self, limit: u64) {
        debug_assert!(limit >= self.limit);
        self.limit = limit;
    }
}

/// Sieve of Eratosthenes over `0..=n`, exactly the textbook loop.
pub fn simple_sieve(n: u64) -> Result<PrimalityTable> {
    simple_sieve_inner(n, None)
}

/// Same sieve with every inner-loop crossing counted into `meter`.
pub fn simple_sieve_metered(n: u64, meter: &mut WorkMeter) -> Result<PrimalityTable> {
    simple_sieve_inner(n, Some(meter))
}

fn simple_sieve_inner(n: u64, mut meter: Option<&mut WorkMeter>) -> Result<PrimalityTable> {
    if n < 2 {
        return Err(Error::BoundTooSmall { got: n, min: 2 });
    }
    let len = (n + 1) as usize;
    let mut bits = BitVec::ones(len);
    bits.clear(0);
    bits.clear(1);
    let mut p = 2u64;
    while p * p <= n {
        if bits.get(p as usize) {
            let mut q = 2 * p;
            while q <= n {
                bits.clear(q as usize);
                if let Some(m) = meter.as_deref_mut() {
                    m.add_crossings(1);
                }
                q += p;
            }
        }
        p += 1;
    }
    Ok(PrimalityTable { limit: n, bits })
}

/// All primes up to `limit`, ascending; empty for `limit < 2`.
pub fn base_primes(limit: u64) -> PrimeList {
    if limit < 2 {
        return PrimeList {
            limit,
            primes: Vec::new(),
        };
    }
    let table = simple_sieve(limit).expect("limit >= 2");
    PrimeList {
        limit,
        primes: table.iter_primes().collect(),
    }
}

/// A sieved window `[left, right]`: bit `j` covers the integer `left + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentBuffer {
    left: u64,
    right: u64,
    bits: BitVec,
}

impl SegmentBuffer {
    pub fn left(&self) -> u64 {
        self.left
    }

    pub fn right(&self) -> u64 {
        self.right
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn is_prime(&self, m: u64) -> bool {
        debug_assert!(self.left <= m && m <= self.right);
        self.bits.get((m - self.left) as usize)
    }

    pub fn iter_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter_ones().map(move |j| self.left + j as u64)
    }
}

/// Sieve `[left, right]` by crossing off multiples of the base primes.
///
/// The first multiple of `p` in the window is `left + ((p - left % p) % p)`;
/// when that lands on `p` itself (only possible for `left <= p`) crossing
/// starts at `2p` so primes inside the window are not crossed off.
pub fn sieve_segment(left: u64, right: u64, base: &PrimeList) -> Result<SegmentBuffer> {
    if left < 2 || left > right {
        return Err(Error::InvalidSegment { left, right });
    }
    let need = right.isqrt();
    if base.limit() < need {
        return Err(Error::InsufficientBasePrimes {
            have: base.limit(),
            need,
            right,
        });
    }
    let mut bits = BitVec::ones((right - left + 1) as usize);
    for &p in base.primes() {
        if p * p > right {
            break;
        }
        let first = left + ((p - left % p) % p);
        let mut q = if first == p { 2 * p } else { first };
        while q <= right {
            bits.clear((q - left) as usize);
            q += p;
        }
    }
    Ok(SegmentBuffer { left, right, bits })
}

/// Streaming segmented sieve: emits the base primes up to `sqrt(n)` first,
/// then each window's primes in order, so the whole stream is ascending and
/// equals the primes up to `n`.
pub struct SegmentedPrimes {
    n: u64,
    delta: u64,
    base: PrimeList,
    base_idx: usize,
    next_left: u64,
    buffer: Vec<u64>,
    buffer_idx: usize,
}

/// Build the segmented stream; `delta` is a pure performance knob and the
/// output is identical for every choice. The customary default is
/// `delta = isqrt(n)`.
pub fn segmented_sieve(n: u64, delta: u64) -> Result<SegmentedPrimes> {
    if n < 4 {
        return Err(Error::BoundTooSmall { got: n, min: 4 });
    }
    if delta < 1 {
        return Err(Error::DeltaTooSmall { got: delta, min: 1 });
    }
    let root = n.isqrt();
    Ok(SegmentedPrimes {
        n,
        delta,
        base: base_primes(root),
        base_idx: 0,
        next_left: root + 1,
        buffer: Vec::new(),
        buffer_idx: 0,
    })
}

impl Iterator for SegmentedPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.base_idx < self.base.len() {
            let p = self.base.primes()[self.base_idx];
            self.base_idx += 1;
            return Some(p);
        }
        loop {
            if self.buffer_idx < self.buffer.len() {
                let p = self.buffer[self.buffer_idx];
                self.buffer_idx += 1;
                return Some(p);
            }
            if self.next_left > self.n {
                return None;
            }
            let left = self.next_left;
            let right = (left + self.delta - 1).min(self.n);
            self.next_left = right + 1;
            let seg = sieve_segment(left, right, &self.base)
                .expect("base primes cover sqrt(n) by construction");
            self.buffer = seg.iter_primes().collect();
            self.buffer_idx = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_division_basics() {
        assert!(!trial_division_is_prime(0));
        assert!(!trial_division_is_prime(1));
        assert!(trial_division_is_prime(2));
        assert!(trial_division_is_prime(3));
        assert!(!trial_division_is_prime(4));
        assert!(trial_division_is_prime(9999991));
        assert!(!trial_division_is_prime(9999993)); // 3 * 3333331
    }

    #[test]
    fn simple_sieve_small() {
        let t = simple_sieve(10).unwrap();
        let primes: Vec<u64> = t.iter_primes().collect();
        assert_eq!(primes, vec![2, 3, 5, 7]);
        assert!(matches!(
            simple_sieve(1),
            Err(Error::BoundTooSmall { got: 1, min: 2 })
        ));
    }

    #[test]
    fn simple_sieve_matches_trial_division_pointwise() {
        let t = simple_sieve(100_000).unwrap();
        for m in 0..=100_000u64 {
            assert_eq!(t.is_prime(m), trial_division_is_prime(m), "m = {m}");
        }
    }

    #[test]
    fn simple_sieve_pi_10k() {
        // Oracle first: count by trial division, then freeze.
        let oracle = (0..=10_000u64).filter(|&m| trial_division_is_prime(m)).count() as u64;
        assert_eq!(oracle, 1229);
        assert_eq!(simple_sieve(10_000).unwrap().count(), oracle);
    }

    #[test]
    fn simple_sieve_crossing_count_matches_formula() {
        // Total inner-loop crossings of the textbook sieve are
        // sum over primes p <= sqrt(n) of (n/p - 1).
        for n in [100u64, 997, 10_000, 65_536] {
            let mut meter = WorkMeter::new();
            simple_sieve_metered(n, &mut meter).unwrap();
            let expected: u64 = base_primes(n.isqrt())
                .primes()
                .iter()
                .map(|&p| n / p - 1)
                .sum();
            assert_eq!(meter.crossings(), expected, "n = {n}");
        }
    }

    #[test]
    fn base_primes_examples() {
        assert!(base_primes(1).is_empty());
        assert_eq!(base_primes(13).primes(), &[2, 3, 5, 7, 11, 13]);
        assert_eq!(base_primes(100).len(), 25);
    }

    #[test]
    fn sieve_segment_hand_checkable() {
        let base = base_primes(11);
        let seg = sieve_segment(100, 120, &base).unwrap();
        let primes: Vec<u64> = seg.iter_primes().collect();
        assert_eq!(primes, vec![101, 103, 107, 109, 113]);
    }

    #[test]
    fn sieve_segment_single_prime_window() {
        assert!(trial_division_is_prime(997));
        let base = base_primes(31);
        let seg = sieve_segment(997, 997, &base).unwrap();
        assert_eq!(seg.iter_primes().collect::<Vec<_>>(), vec![997]);
    }

    #[test]
    fn sieve_segment_does_not_cross_low_primes() {
        // left <= p hits the self-crossing guard.
        let base = base_primes(7);
        let seg = sieve_segment(2, 30, &base).unwrap();
        let primes: Vec<u64> = seg.iter_primes().collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn sieve_segment_rejects_short_base() {
        let base = base_primes(10);
        match sieve_segment(100, 200, &base) {
            Err(Error::InsufficientBasePrimes { have, need, right }) => {
                assert_eq!((have, need, right), (10, 14, 200));
            }
            other => panic!("expected InsufficientBasePrimes, got {other:?}"),
        }
        assert!(matches!(
            sieve_segment(1, 10, &base),
            Err(Error::InvalidSegment { .. })
        ));
        assert!(matches!(
            sieve_segment(10, 5, &base),
            Err(Error::InvalidSegment { .. })
        ));
    }

    #[test]
    fn sieve_segment_matches_simple_sieve_window() {
        let (lo, hi) = (1_000_000u64, 1_010_000u64);
        let table = simple_sieve(hi).unwrap();
        let seg = sieve_segment(lo, hi, &base_primes(hi.isqrt())).unwrap();
        for m in lo..=hi {
            assert_eq!(seg.is_prime(m), table.is_prime(m), "m = {m}");
        }
    }

    #[test]
    fn segmented_sieve_small() {
        let primes: Vec<u64> = segmented_sieve(100, 10).unwrap().collect();
        let oracle: Vec<u64> = (2..=100).filter(|&m| trial_division_is_prime(m)).collect();
        assert_eq!(primes, oracle);
        assert_eq!(primes.len(), 25);
    }

    #[test]
    fn segmented_sieve_delta_invariance() {
        let reference: Vec<u64> = segmented_sieve(10_000, 1).unwrap().collect();
        assert_eq!(reference.len(), 1229);
        for delta in 2..=200 {
            let stream: Vec<u64> = segmented_sieve(10_000, delta).unwrap().collect();
            assert_eq!(stream, reference, "delta = {delta}");
        }
    }

    #[test]
    fn segmented_sieve_rejects_bad_arguments() {
        assert!(matches!(
            segmented_sieve(3, 10),
            Err(Error::BoundTooSmall { .. })
        ));
        assert!(matches!(
            segmented_sieve(100, 0),
            Err(Error::DeltaTooSmall { .. })
        ));
    }

    #[test]
    fn segmented_sieve_matches_simple_at_one_million() {
        let table = simple_sieve(1_000_000).unwrap();
        let count = segmented_sieve(1_000_000, 1000)
            .unwrap()
            .inspect(|&p| assert!(table.is_prime(p)))
            .count() as u64;
        assert_eq!(count, table.count());
        assert_eq!(count, 78498);
    }

    #[test]
    fn segmented_sieve_delta_is_only_a_knob_at_one_million() {
        let n = 1_000_000u64;
        let reference: Vec<u64> = segmented_sieve(n, n.isqrt()).unwrap().collect();
        for delta in [10, 1000] {
            let stream: Vec<u64> = segmented_sieve(n, delta).unwrap().collect();
            assert_eq!(stream, reference, "delta = {delta}");
        }
    }
}
