//! A segmented quadratic-form sieve with a pausable, budgeted execution
//! interface.
//!
//! Primality over an interval `[lo, lo+delta)` is computed in phases:
//! three quadratic-form passes toggle a parity bit per solution
//! (`4x^2 + y^2 = m` for `m = 1, 5 mod 12`, `3x^2 + y^2 = m` for
//! `m = 7 mod 12`, `3x^2 - y^2 = m` with `x > y` for `m = 11 mod 12`),
//! a squarefree pass clears multiples of `p^2` for primes `p >= 5`, and a
//! final small-prime pass closes the interval. Integers divisible by 2 or 3
//! are never marked, so surviving set bits are exactly the primes.
//!
//! `step` performs at most a caller-chosen number of work units and can stop
//! anywhere: one unit is one lattice probe in a form phase (visiting a point
//! or opening a column) or one crossing-class action in the later phases.
//! The final bit vector is identical no matter how the budget is sliced.
//!
//! The squarefree pass reads a caller-owned base-prime list and grows it
//! lazily (and resumably) when the interval outruns it; that is the only
//! state carried from one interval to the next.

use crate::baseline::{base_primes, PrimeList};
use crate::bits::BitVec;
use crate::error::{Error, Result};

/// Intervals start at 7; the prelude covers everything below.
pub const MIN_LO: u64 = 7;

/// Exclusive ceiling on `lo + delta`, keeping the form arithmetic far from
/// u64 overflow.
pub const MAX_HI: u64 = 1 << 31;

/// Execution phases, traversed strictly in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Form1,
    Form2,
    Form3,
    Squarefree,
    SmallPrime,
    Done,
}

/// Outcome of one `step` call.
#[derive(Clone, Copy, Debug)]
pub struct StepOutcome {
    pub completed: bool,
    pub used: u64,
}

#[derive(Clone, Copy, Debug)]
enum Form {
    One,
    Two,
    Three,
}

impl Form {
    fn value(self, x: u64, y: u64) -> u64 {
        match self {
            Form::One => 4 * x * x + y * y,
            Form::Two => 3 * x * x + y * y,
            Form::Three => 3 * x * x - y * y,
        }
    }

    fn marks(self, m: u64) -> bool {
        match self {
            Form::One => m % 12 == 1 || m % 12 == 5,
            Form::Two => m % 12 == 7,
            Form::Three => m % 12 == 11,
        }
    }

    fn x_start(self, lo: u64) -> u64 {
        match self {
            Form::One | Form::Two => 1,
            // Columns with 3x^2 <= lo are empty; a floor-estimate may open
            // at most a couple of empty columns, which the probe skips.
            Form::Three => 2.max((lo / 3).isqrt()),
        }
    }

    /// True once no column at or beyond `x` can reach below `hi`.
    fn exhausted(self, x: u64, hi: u64) -> bool {
        match self {
            Form::One => 4 * x * x + 1 >= hi,
            Form::Two => 3 * x * x + 1 >= hi,
            // The smallest value in column x, at y = x - 1, is 2x^2 + 2x - 1.
            Form::Three => 2 * x * x + 2 * x > hi,
        }
    }

    /// First y of column `x` intersected with `[lo, hi)`, on the parity that
    /// can produce odd values; None if the column is empty.
    fn first_y(self, x: u64, lo: u64, hi: u64) -> Option<u64> {
        match self {
            Form::One => {
                let mut y = ceil_sqrt(lo.saturating_sub(4 * x * x)).max(1);
                if y.is_multiple_of(2) {
                    y += 1; // 4x^2 + y^2 is odd only for odd y
                }
                (self.value(x, y) < hi).then_some(y)
            }
            Form::Two => {
                let mut y = ceil_sqrt(lo.saturating_sub(3 * x * x)).max(1);
                if y % 2 == x % 2 {
                    y += 1; // 3x^2 + y^2 is odd only for x, y of opposite parity
                }
                (self.value(x, y) < hi).then_some(y)
            }
            Form::Three => {
                let from_top = 3 * x * x;
                if from_top <= lo {
                    return None;
                }
                // Values decrease as y grows: start at the smallest y that
                // brings the value below hi.
                let mut y = match from_top.checked_sub(hi) {
                    Some(t) => (t).isqrt() + 1,
                    None => 1,
                }
                .max(1);
                if y % 2 == x % 2 {
                    y += 1;
                }
                (y < x && self.value(x, y) >= lo).then_some(y)
            }
        }
    }
}

/// Smallest integer whose square is at least `t`.
fn ceil_sqrt(t: u64) -> u64 {
    if t == 0 {
        0
    } else {
        (t - 1).isqrt() + 1
    }
}

#[derive(Clone, Debug)]
enum SfCursor {
    /// Check base-prime coverage, extending over it if short.
    Entry,
    Extend(Extension),
    /// Clearing multiples of `primes[idx]^2`; `multiple = 0` means the
    /// prime's first multiple has not been located yet.
    Cross { idx: usize, multiple: u64 },
}

/// Resumable base-prime extension: sieve the window `(old, new]` with the
/// primes already on hand, then collect the survivors. One crossing or one
/// collected value per unit.
#[derive(Clone, Debug)]
struct Extension {
    win_lo: u64,
    win_hi: u64,
    bits: BitVec,
    stage: ExtStage,
}

#[derive(Clone, Debug)]
enum ExtStage {
    Cross { idx: usize, multiple: u64 },
    Collect { value: u64 },
}

impl Extension {
    /// One geometric hop toward `needed`, capped at `old^2` so the primes
    /// already known can sieve the whole window. Chains until covered.
    fn plan(old: u64, needed: u64) -> Extension {
        debug_assert!(needed > old);
        let win_lo = old + 1;
        let win_hi = if old < 2 {
            3 // bootstrap hop: yields the primes 2 and 3
        } else {
            needed.max(old * 2).min(old * old)
        };
        Extension {
            win_lo,
            win_hi,
            bits: BitVec::ones((win_hi - win_lo + 1) as usize),
            stage: ExtStage::Cross { idx: 0, multiple: 0 },
        }
    }

    /// Perform one unit; true once the window has been folded into `base`.
    fn one_unit(&mut self, base: &mut PrimeList) -> bool {
        loop {
            match &mut self.stage {
                ExtStage::Cross { idx, multiple } => {
                    let primes = base.primes();
                    if *idx >= primes.len() || primes[*idx] * primes[*idx] > self.win_hi {
                        self.stage = ExtStage::Collect { value: self.win_lo };
                        continue;
                    }
                    let p = primes[*idx];
                    if *multiple == 0 {
                        // win_lo > p, so the first multiple here is >= 2p and
                        // never crosses the prime itself.
                        let first = self.win_lo.div_ceil(p) * p;
                        if first > self.win_hi {
                            *idx += 1;
                        } else {
                            *multiple = first;
                        }
                        return false;
                    }
                    self.bits.clear((*multiple - self.win_lo) as usize);
                    *multiple += p;
                    if *multiple > self.win_hi {
                        *idx += 1;
                        *multiple = 0;
                    }
                    return false;
                }
                ExtStage::Collect { value } => {
                    let v = *value;
                    if v >= 2 && self.bits.get((v - self.win_lo) as usize) {
                        base.push_extended(v);
                    }
                    *value += 1;
                    if *value > self.win_hi {
                        base.set_limit(self.win_hi);
                        return true;
                    }
                    return false;
                }
            }
        }
    }
}

/// An interval being sieved; resumable at any unit boundary.
#[derive(Clone, Debug)]
pub struct PendingInterval {
    lo: u64,
    hi: u64,
    parity: BitVec,
    phase: Phase,
    x: u64,
    y: u64,
    sf: SfCursor,
    spent: u64,
    visits: u64,
    crossings: u64,
}

impl PendingInterval {
    /// A fresh interval `[lo, lo+delta)` at the first form phase with zeroed
    /// parity and no work spent.
    pub fn new(lo: u64, delta: u64) -> Result<Self> {
        if delta < 1 {
            return Err(Error::DeltaTooSmall { got: delta, min: 1 });
        }
        let in_range = lo >= MIN_LO
            && lo
                .checked_add(delta)
                .is_some_and(|hi| hi <= MAX_HI);
        if !in_range {
            return Err(Error::IntervalOutOfRange { lo, delta });
        }
        Ok(PendingInterval {
            lo,
            hi: lo + delta,
            parity: BitVec::zeros(delta as usize),
            phase: Phase::Form1,
            x: 0,
            y: 0,
            sf: SfCursor::Entry,
            spent: 0,
            visits: 0,
            crossings: 0,
        })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn delta(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    /// Total work units spent so far, extension work included.
    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn lattice_visits(&self) -> u64 {
        self.visits
    }

    pub fn crossings(&self) -> u64 {
        self.crossings
    }

    /// Live words held by this interval, for space accounting.
    pub fn memory_words(&self) -> u64 {
        let ext = match &self.sf {
            SfCursor::Extend(e) => e.bits.word_count() as u64,
            _ => 0,
        };
        self.parity.word_count() as u64 + ext + 8
    }

    /// Work units charged from outside (base-prime growth done on this
    /// interval's behalf).
    pub(crate) fn charge_crossings(&mut self, units: u64) {
        self.spent += units;
        self.crossings += units;
    }

    /// Perform at most `budget` work units against this interval. `base` is
    /// the shared base-prime list; it is consulted and, if too short for the
    /// squarefree pass, grown in place. Stepping a finished interval is a
    /// no-op.
    pub fn step(&mut self, budget: u64, base: &mut PrimeList) -> StepOutcome {
        let mut used = 0u64;
        while used < budget && self.phase != Phase::Done {
            used += self.one_unit(base);
        }
        self.spent += used;
        debug_assert_eq!(self.spent, self.visits + self.crossings);
        StepOutcome {
            completed: self.phase == Phase::Done,
            used,
        }
    }

    /// Extract the finished interval. Errors unless the phase is `Done`.
    pub fn finish(self) -> Result<ReadyInterval> {
        if self.phase != Phase::Done {
            return Err(Error::NotDone);
        }
        let primes = self
            .parity
            .iter_ones()
            .map(|j| self.lo + j as u64)
            .collect();
        Ok(ReadyInterval {
            lo: self.lo,
            delta: self.hi - self.lo,
            bits: self.parity,
            primes,
            cursor: 0,
        })
    }

    /// At most one charged unit; free cursor/phase transitions may happen on
    /// the way. Returns 0 only when the transitions land on `Done`.
    fn one_unit(&mut self, base: &mut PrimeList) -> u64 {
        loop {
            match self.phase {
                Phase::Form1 | Phase::Form2 | Phase::Form3 => {
                    if let Some(u) = self.form_unit() {
                        return u;
                    }
                }
                Phase::Squarefree => {
                    if let Some(u) = self.squarefree_unit(base) {
                        return u;
                    }
                }
                Phase::SmallPrime => {
                    if let Some(u) = self.small_prime_unit() {
                        return u;
                    }
                }
                Phase::Done => return 0,
            }
        }
    }

    fn advance_phase(&mut self) {
        self.phase = match self.phase {
            Phase::Form1 => Phase::Form2,
            Phase::Form2 => Phase::Form3,
            Phase::Form3 => Phase::Squarefree,
            Phase::Squarefree => Phase::SmallPrime,
            Phase::SmallPrime | Phase::Done => Phase::Done,
        };
        self.x = 0;
        self.y = 0;
    }

    fn form_unit(&mut self) -> Option<u64> {
        let form = match self.phase {
            Phase::Form1 => Form::One,
            Phase::Form2 => Form::Two,
            Phase::Form3 => Form::Three,
            _ => unreachable!(),
        };
        if self.x == 0 {
            self.x = form.x_start(self.lo);
        }
        if form.exhausted(self.x, self.hi) {
            self.advance_phase();
            return None;
        }
        if self.y == 0 {
            // Open the column: one probe.
            match form.first_y(self.x, self.lo, self.hi) {
                Some(y) => self.y = y,
                None => self.x += 1,
            }
            self.visits += 1;
            return Some(1);
        }
        // Visit (x, y).
        let close = match form {
            Form::One | Form::Two => {
                let m = form.value(self.x, self.y);
                if m < self.hi {
                    debug_assert!(m >= self.lo);
                    if form.marks(m) {
                        self.parity.toggle((m - self.lo) as usize);
                    }
                    self.y += 2;
                    false
                } else {
                    true
                }
            }
            Form::Three => {
                if self.y >= self.x {
                    true
                } else {
                    let m = form.value(self.x, self.y);
                    if m >= self.lo {
                        debug_assert!(m < self.hi);
                        if form.marks(m) {
                            self.parity.toggle((m - self.lo) as usize);
                        }
                        self.y += 2;
                        false
                    } else {
                        true
                    }
                }
            }
        };
        if close {
            self.x += 1;
            self.y = 0;
        }
        self.visits += 1;
        Some(1)
    }

    fn squarefree_unit(&mut self, base: &mut PrimeList) -> Option<u64> {
        if matches!(self.sf, SfCursor::Entry) {
            let needed = (self.hi - 1).isqrt();
            self.sf = if base.limit() >= needed {
                SfCursor::Cross {
                    idx: base.primes().partition_point(|&p| p < 5),
                    multiple: 0,
                }
            } else {
                SfCursor::Extend(Extension::plan(base.limit(), needed))
            };
            return None;
        }
        if let SfCursor::Extend(ext) = &mut self.sf {
            let finished = ext.one_unit(base);
            if finished {
                // Back to Entry: another hop may be required.
                self.sf = SfCursor::Entry;
            }
            self.crossings += 1;
            return Some(1);
        }
        let (mut idx, mut multiple) = match &self.sf {
            SfCursor::Cross { idx, multiple } => (*idx, *multiple),
            _ => unreachable!(),
        };
        let last = self.hi - 1;
        let primes = base.primes();
        if idx >= primes.len() || primes[idx] * primes[idx] > last {
            self.advance_phase();
            return None;
        }
        let p = primes[idx];
        let sq = p * p;
        if multiple == 0 {
            let first = self.lo.div_ceil(sq) * sq;
            if first > last {
                idx += 1;
            } else {
                multiple = first;
            }
        } else {
            self.parity.clear((multiple - self.lo) as usize);
            multiple += sq;
            if multiple > last {
                idx += 1;
                multiple = 0;
            }
        }
        self.sf = SfCursor::Cross { idx, multiple };
        self.crossings += 1;
        Some(1)
    }

    /// Closing sweep for the primes below the form machinery's reach. With
    /// `lo >= 7` none of them can lie inside the interval, so this costs
    /// three units and sets nothing; it exists so the phase sequence is
    /// total.
    fn small_prime_unit(&mut self) -> Option<u64> {
        const SMALL: [u64; 3] = [2, 3, 5];
        if self.x as usize >= SMALL.len() {
            self.advance_phase();
            return None;
        }
        let p = SMALL[self.x as usize];
        if p >= self.lo && p < self.hi {
            self.parity.set((p - self.lo) as usize);
        }
        self.x += 1;
        self.crossings += 1;
        Some(1)
    }
}

/// A fully sieved interval: bit vector, extracted prime list and a monotone
/// read cursor for incremental consumption.
#[derive(Clone, Debug)]
pub struct ReadyInterval {
    lo: u64,
    delta: u64,
    bits: BitVec,
    primes: Vec<u64>,
    cursor: usize,
}

impl ReadyInterval {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// One past the last covered value.
    pub fn end(&self) -> u64 {
        self.lo + self.delta
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_prime(&self, v: u64) -> bool {
        debug_assert!(self.lo <= v && v < self.end());
        self.bits.get((v - self.lo) as usize)
    }

    /// Smallest prime at or after `v` in this interval, via the shared
    /// monotone cursor; `v` must not go backwards between calls.
    pub fn next_prime_at_or_after(&mut self, v: u64) -> Option<u64> {
        while self.cursor < self.primes.len() && self.primes[self.cursor] < v {
            self.cursor += 1;
        }
        self.primes.get(self.cursor).copied()
    }

    /// Live words held by this interval, for space accounting.
    pub fn memory_words(&self) -> u64 {
        self.bits.word_count() as u64 + self.primes.len() as u64 + 4
    }
}

/// Convenience composition: sieve `[lo, lo+delta)` to completion in one call.
pub fn atkin_segment_primes(lo: u64, delta: u64) -> Result<ReadyInterval> {
    let mut pending = PendingInterval::new(lo, delta)?;
    let mut base = base_primes((lo + delta - 1).isqrt());
    while !pending.step(u64::MAX, &mut base).completed {}
    pending.finish()
}

/// Grow `base` to cover every prime up to `limit`, returning the units of
/// work performed. The incremental wrapper calls this at interval swaps so
/// budgeted stepping never extends mid-interval.
pub fn ensure_base(base: &mut PrimeList, limit: u64) -> u64 {
    let mut units = 0u64;
    while base.limit() < limit {
        let mut ext = Extension::plan(base.limit(), limit);
        loop {
            units += 1;
            if ext.one_unit(base) {
                break;
            }
        }
    }
    units
}
