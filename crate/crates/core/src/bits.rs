//! Word-backed bit vector shared by every sieve in the crate.
//!
//! One bit per integer, no residue compression, so index arithmetic in the
//! sieves stays a plain subtraction.

/// Fixed-length bit vector over `u64` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    /// A vector of `len` zero bits.
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0u64; len.div_ceil(64)],
            len,
        }
    }

    /// A vector of `len` one bits.
    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            words: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        // Keep the unused high bits of the last word clear so count_ones and
        // equality work on the words directly.
        let extra = v.words.len() * 64 - len;
        if extra > 0 {
            *v.words.last_mut().unwrap() >>= extra;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of backing words, for space accounting.
    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let base = wi * 64;
            WordBits { word, base }
        })
    }
}

struct WordBits {
    word: u64,
    base: usize,
}

impl Iterator for WordBits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let tz = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + tz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zeros_and_ones() {
        let z = BitVec::zeros(130);
        assert_eq!(z.len(), 130);
        assert_eq!(z.count_ones(), 0);
        let o = BitVec::ones(130);
        assert_eq!(o.count_ones(), 130);
        assert!(o.get(0) && o.get(63) && o.get(64) && o.get(129));
    }

    #[test]
    fn ones_clears_excess_bits() {
        let o = BitVec::ones(65);
        assert_eq!(o.word_count(), 2);
        assert_eq!(o.count_ones(), 65);
        // Equality must hold against a vector built bit by bit.
        let mut b = BitVec::zeros(65);
        for i in 0..65 {
            b.set(i);
        }
        assert_eq!(o, b);
    }

    #[test]
    fn word_boundaries() {
        let mut b = BitVec::zeros(256);
        for &i in &[0usize, 63, 64, 127, 128, 255] {
            b.set(i);
        }
        assert_eq!(b.iter_ones().collect::<Vec<_>>(), [0, 63, 64, 127, 128, 255]);
        b.clear(64);
        b.toggle(65);
        assert_eq!(b.count_ones(), 6);
        assert!(!b.get(64) && b.get(65));
    }

    proptest! {
        #[test]
        fn matches_bool_vec_model(ops in proptest::collection::vec((0usize..200, 0u8..3), 0..300)) {
            let mut b = BitVec::zeros(200);
            let mut model = [false; 200];
            for (i, op) in ops {
                match op {
                    0 => { b.set(i); model[i] = true; }
                    1 => { b.clear(i); model[i] = false; }
                    _ => { b.toggle(i); model[i] = !model[i]; }
                }
            }
            for (i, &m) in model.iter().enumerate() {
                prop_assert_eq!(b.get(i), m);
            }
            prop_assert_eq!(b.count_ones(), model.iter().filter(|&&m| m).count());
            let ones: Vec<usize> = b.iter_ones().collect();
            let expect: Vec<usize> = (0..200).filter(|&i| model[i]).collect();
            prop_assert_eq!(ones, expect);
        }
    }
}
