//! The rolling sieve: an incremental prime generator built on a circular
//! array of stacks.
//!
//! Array slot `pos` corresponds to the integer `n` about to be classified;
//! slot `(pos + k) % delta` to `n + k`. Each active sieving prime `p` sits in
//! the slot of its next multiple. Classifying `n` pops every prime from
//! `n`'s stack (each divides `n`, so `n` is composite) and pushes it toward
//! its next multiple `n + p`. An empty stack means `n` is prime unless
//! `n = r^2`, in which case `r` is a newly found prime and starts sieving.
//!
//! The window grows by two slots whenever `pos` wraps to zero, which keeps
//! `delta^2 > n` (so `(pos + p) % delta` never laps the cursor) at a total
//! width of O(sqrt n). Stacks are array-backed for speed; order within a
//! stack is semantically irrelevant. Space is pi(sqrt n) stacked primes
//! plus one stack header per slot, O(sqrt n) words either way.

use std::fmt;
use std::io::{Read, Write};

use crate::baseline::{base_primes, trial_division_is_prime};
use crate::error::{Error, Result};
use crate::instrument::WorkMeter;

/// The primes below 100, hard-coded so prime streams can serve values from 2
/// upward while the sieve machinery itself starts at 100.
pub const PRELUDE_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Smallest accepted starting point; below this the square tracker would
/// degenerate (r <= 2).
pub const MIN_START: u64 = 100;

/// Largest accepted starting point; keeps `r^2` comfortably inside u64.
pub const MAX_START: u64 = 1 << 60;

const SNAPSHOT_MAGIC: &[u8; 4] = b"RSV1";

/// Incremental sieve state. Single-owner: one sequence of calls per value.
#[derive(Clone, Debug)]
pub struct RollingSieve {
    /// Next value to classify.
    n: u64,
    /// Circular cursor; slot of `n`.
    pos: usize,
    /// Square tracker: the next square to watch for is `s = r^2`.
    r: u64,
    s: u64,
    /// Current circular-array length.
    delta: usize,
    stacks: Vec<Vec<u64>>,
    /// Total primes currently stacked; always pi(r - 1).
    live_nodes: u64,
    meter: Option<WorkMeter>,
}

impl RollingSieve {
    /// Set up the sieve so that the first `next()` call classifies `start`.
    ///
    /// Finds the primes up to `sqrt(start)` and places each on the stack of
    /// its first multiple at or after `start`. Afterwards
    /// `isqrt(start) = r - 1 = delta - 3`, `start < s = r^2` and `r + 1 < delta`.
    pub fn new(start: u64) -> Result<Self> {
        Self::build(start, None)
    }

    /// Same, with a work meter attached. Metering never changes behavior,
    /// only records it.
    pub fn with_meter(start: u64) -> Result<Self> {
        Self::build(start, Some(WorkMeter::new()))
    }

    fn build(start: u64, meter: Option<WorkMeter>) -> Result<Self> {
        if start < MIN_START {
            return Err(Error::StartTooSmall {
                got: start,
                min: MIN_START,
            });
        }
        if start > MAX_START {
            return Err(Error::StartTooLarge { got: start });
        }
        let r = start.isqrt() + 1;
        let s = r * r;
        let delta = (r + 2) as usize;
        let mut stacks = vec![Vec::new(); delta];
        let base = base_primes(r - 1);
        for &p in base.primes() {
            let slot = ((p - start % p) % p) as usize;
            stacks[slot].push(p);
        }
        Ok(RollingSieve {
            n: start,
            pos: 0,
            r,
            s,
            delta,
            stacks,
            live_nodes: base.len() as u64,
            meter,
        })
    }

    /// The value the next `next()` call will classify.
    pub fn current(&self) -> u64 {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Number of primes currently held in stacks (= pi(r - 1)).
    pub fn live_nodes(&self) -> u64 {
        self.live_nodes
    }

    pub fn meter(&self) -> Option<&WorkMeter> {
        self.meter.as_ref()
    }

    /// Classify the current value and advance to the next one. Returns true
    /// iff the classified value is prime.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> bool {
        let before = self.meter.as_ref().map(|m| m.total());
        let mut is_prime = true;
        let mut moves = 0u64;
        while let Some(p) = self.stacks[self.pos].pop() {
            let dest = (self.pos + p as usize) % self.delta;
            self.stacks[dest].push(p);
            moves += 1;
            is_prime = false;
        }
        if let Some(m) = &mut self.meter {
            m.add_pops(moves);
            m.add_pushes(moves);
        }
        if self.n == self.s {
            // n is the square of r; an empty stack means no smaller prime
            // divides r^2, so r itself is prime and starts sieving.
            if is_prime {
                self.activate_r();
                is_prime = false;
            }
            self.r += 1;
            self.s = self.r * self.r;
        }
        self.advance_cursor();
        if let Some(b) = before {
            let m = self.meter.as_mut().expect("meter present");
            let cost = m.total() - b;
            m.record_call_cost(cost);
        }
        is_prime
    }

    /// Advance past the smallest prime at or after the current value and
    /// return it.
    pub fn next_prime(&mut self) -> u64 {
        while !self.next() {}
        self.n - 1
    }

    /// Classify the current value like `next()`, returning its complete
    /// factorization. Each popped prime is divided out to its full power;
    /// the cofactor that remains afterwards is 1 or a single prime.
    pub fn next_factored(&mut self) -> FactoredInteger {
        let before = self.meter.as_ref().map(|m| m.total());
        let value = self.n;
        let mut remaining = value;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut is_prime = true;
        let mut moves = 0u64;
        while let Some(p) = self.stacks[self.pos].pop() {
            let dest = (self.pos + p as usize) % self.delta;
            self.stacks[dest].push(p);
            moves += 1;
            is_prime = false;
            let mut exp = 0u32;
            while remaining.is_multiple_of(p) {
                remaining /= p;
                exp += 1;
            }
            debug_assert!(exp >= 1, "stacked prime must divide its slot value");
            factors.push((p, exp));
        }
        if let Some(m) = &mut self.meter {
            m.add_pops(moves);
            m.add_pushes(moves);
        }
        if self.n == self.s {
            if is_prime {
                self.activate_r();
                let mut exp = 0u32;
                while remaining.is_multiple_of(self.r) {
                    remaining /= self.r;
                    exp += 1;
                }
                factors.push((self.r, exp));
            }
            self.r += 1;
            self.s = self.r * self.r;
        }
        self.advance_cursor();
        if remaining > 1 {
            factors.push((remaining, 1));
        }
        factors.sort_unstable_by_key(|&(p, _)| p);
        if let Some(b) = before {
            let m = self.meter.as_mut().expect("meter present");
            let cost = m.total() - b;
            m.record_call_cost(cost);
        }
        FactoredInteger { value, factors }
    }

    fn activate_r(&mut self) {
        debug_assert!(
            (self.r as usize) < self.delta,
            "r < delta is invariant; the window has fallen behind"
        );
        let dest = (self.pos + self.r as usize) % self.delta;
        self.stacks[dest].push(self.r);
        self.live_nodes += 1;
        if let Some(m) = &mut self.meter {
            m.add_pushes(1);
        }
    }

    fn advance_cursor(&mut self) {
        self.n += 1;
        self.pos = (self.pos + 1) % self.delta;
        if self.pos == 0 {
            // With pos at zero, slot i corresponds to n + i for every i, so
            // appending empty slots at the tail cannot misplace any pending
            // prime. Growing two per wrap keeps delta^2 > n.
            self.delta += 2;
            self.stacks.push(Vec::new());
            self.stacks.push(Vec::new());
        }
    }

    /// Full structural audit of the state. Checks the square tracker, the
    /// window geometry and that every prime up to `r - 1` sits in exactly
    /// the stack of its next multiple. Intended for tests and for validating
    /// loaded snapshots; costs a small sieve up to `sqrt(n)`.
    pub fn verify_invariants(&self) -> std::result::Result<(), String> {
        if self.s != self.r * self.r {
            return Err(format!("s = {} is not r^2 = {}", self.s, self.r * self.r));
        }
        // n == s is legal between calls: r advances only while the square
        // itself is being classified.
        if !((self.r - 1) * (self.r - 1) <= self.n && self.n <= self.s) {
            return Err(format!(
                "square tracker out of step: (r-1)^2 = {} <= n = {} <= s = {} violated",
                (self.r - 1) * (self.r - 1),
                self.n,
                self.s
            ));
        }
        if self.r as usize >= self.delta {
            return Err(format!("r = {} not below delta = {}", self.r, self.delta));
        }
        let delta = self.delta as u64;
        if delta * delta <= self.n {
            return Err(format!(
                "window too small: delta^2 = {} <= n = {}",
                delta * delta,
                self.n
            ));
        }
        if delta > 4 * self.n.isqrt() + 8 {
            return Err(format!(
                "window too large: delta = {delta} exceeds 4*sqrt(n)+8 at n = {}",
                self.n
            ));
        }
        if self.pos >= self.delta {
            return Err(format!("cursor {} outside window {}", self.pos, self.delta));
        }
        let expected = base_primes(self.r - 1);
        let mut seen = std::collections::BTreeMap::new();
        for (slot, stack) in self.stacks.iter().enumerate() {
            for &p in stack {
                if seen.insert(p, slot).is_some() {
                    return Err(format!("prime {p} stacked twice"));
                }
            }
        }
        if seen.len() as u64 != self.live_nodes {
            return Err(format!(
                "node count {} does not match stacked primes {}",
                self.live_nodes,
                seen.len()
            ));
        }
        if seen.len() != expected.len() {
            return Err(format!(
                "expected pi(r-1) = {} stacked primes, found {}",
                expected.len(),
                seen.len()
            ));
        }
        for &p in expected.primes() {
            let Some(&slot) = seen.get(&p) else {
                return Err(format!("prime {p} missing from the stacks"));
            };
            let next_multiple = self.n + ((p - self.n % p) % p);
            let want = (self.pos + (next_multiple - self.n) as usize) % self.delta;
            if slot != want {
                return Err(format!(
                    "prime {p} in slot {slot}, expected slot {want} (next multiple {next_multiple})"
                ));
            }
        }
        Ok(())
    }

    /// Serialize the state: magic `RSV1`, then `n`, `pos`, `r`, `s`, `delta`
    /// as 64-bit little-endian words, then `delta` stack records, each a
    /// 32-bit little-endian count followed by that many 64-bit little-endian
    /// primes. The meter is not part of the state.
    pub fn save_snapshot<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(SNAPSHOT_MAGIC)?;
        for v in [
            self.n,
            self.pos as u64,
            self.r,
            self.s,
            self.delta as u64,
        ] {
            w.write_all(&v.to_le_bytes())?;
        }
        for stack in &self.stacks {
            w.write_all(&(stack.len() as u32).to_le_bytes())?;
            for &p in stack {
                w.write_all(&p.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Restore a state saved by `save_snapshot`. Continuing a loaded state
    /// is behaviorally identical to never pausing.
    pub fn load_snapshot<R: Read>(rdr: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        rdr.read_exact(&mut magic)?;
        if &magic != SNAPSHOT_MAGIC {
            return Err(Error::MalformedSnapshot(format!(
                "bad magic {magic:02x?}"
            )));
        }
        let n = read_u64(rdr)?;
        let pos = read_u64(rdr)?;
        let r = read_u64(rdr)?;
        let s = read_u64(rdr)?;
        let delta = read_u64(rdr)?;
        if delta == 0 || delta > (1 << 32) {
            return Err(Error::MalformedSnapshot(format!(
                "implausible delta {delta}"
            )));
        }
        if pos >= delta {
            return Err(Error::MalformedSnapshot(format!(
                "cursor {pos} outside window {delta}"
            )));
        }
        let mut stacks = Vec::with_capacity(delta as usize);
        let mut live_nodes = 0u64;
        for _ in 0..delta {
            let count = read_u32(rdr)?;
            let mut stack = Vec::with_capacity(count as usize);
            for _ in 0..count {
                stack.push(read_u64(rdr)?);
            }
            live_nodes += count as u64;
            stacks.push(stack);
        }
        let state = RollingSieve {
            n,
            pos: pos as usize,
            r,
            s,
            delta: delta as usize,
            stacks,
            live_nodes,
            meter: None,
        };
        state
            .verify_invariants()
            .map_err(Error::MalformedSnapshot)?;
        Ok(state)
    }

    #[cfg(test)]
    pub(crate) fn stacks(&self) -> &[Vec<u64>] {
        &self.stacks
    }

    #[cfg(test)]
    pub(crate) fn stacks_mut(&mut self) -> &mut [Vec<u64>] {
        &mut self.stacks
    }
}

fn read_u64<R: Read>(rdr: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    rdr.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_u32<R: Read>(rdr: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    rdr.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

/// An integer together with its complete factorization, ascending primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Recompute the product of the listed prime powers.
    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product()
    }

    /// Every listed prime really is prime, by trial division.
    pub fn factors_are_prime(&self) -> bool {
        self.factors.iter().all(|&(p, _)| trial_division_is_prime(p))
    }
}

impl fmt::Display for FactoredInteger {
    /// Renders `100 = 2^2 * 5^2`; primes come out as `101 = 101^1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.value)?;
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{p}^{e}")?;
        }
        Ok(())
    }
}

/// Unbounded iterator over all primes from 2 upward: the prelude first, then
/// a rolling sieve from 100.
pub struct RollingPrimes {
    prelude_idx: usize,
    sieve: Option<RollingSieve>,
}

impl RollingPrimes {
    pub fn new() -> Self {
        RollingPrimes {
            prelude_idx: 0,
            sieve: None,
        }
    }
}

impl Default for RollingPrimes {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for RollingPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.prelude_idx < PRELUDE_PRIMES.len() {
            let p = PRELUDE_PRIMES[self.prelude_idx];
            self.prelude_idx += 1;
            return Some(p);
        }
        let sieve = self
            .sieve
            .get_or_insert_with(|| RollingSieve::new(MIN_START).expect("start = 100 is valid"));
        Some(sieve.next_prime())
    }
}
