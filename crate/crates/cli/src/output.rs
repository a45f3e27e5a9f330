//! Output encodings for prime streams.
//!
//! TEXT is one decimal value per line. BITMAP is a packed primality map for
//! a contiguous range: the header `PBM1`, the range start and the covered
//! count as 64-bit little-endian words, then `ceil(count/8)` bytes where bit
//! `j` of byte `k` (little-endian bit order) covers `lo + 8k + j`.

use std::io::{self, Write};

pub const BITMAP_MAGIC: &[u8; 4] = b"PBM1";

/// Packed primality bitmap over `[lo, lo + count)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitmap {
    pub lo: u64,
    pub count: u64,
    bytes: Vec<u8>,
}

impl Bitmap {
    pub fn new(lo: u64, count: u64) -> Bitmap {
        Bitmap {
            lo,
            count,
            bytes: vec![0u8; (count as usize).div_ceil(8)],
        }
    }

    /// Mark `value` prime; it must lie inside the covered range.
    pub fn mark(&mut self, value: u64) {
        assert!(self.lo <= value && value - self.lo < self.count);
        let index = (value - self.lo) as usize;
        self.bytes[index / 8] |= 1 << (index % 8);
    }

    pub fn is_marked(&self, value: u64) -> bool {
        assert!(self.lo <= value && value - self.lo < self.count);
        let index = (value - self.lo) as usize;
        self.bytes[index / 8] & (1 << (index % 8)) != 0
    }

    /// Marked values, ascending.
    pub fn marked(&self) -> Vec<u64> {
        (self.lo..self.lo + self.count)
            .filter(|&v| self.is_marked(v))
            .collect()
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(BITMAP_MAGIC)?;
        w.write_all(&self.lo.to_le_bytes())?;
        w.write_all(&self.count.to_le_bytes())?;
        w.write_all(&self.bytes)
    }

    /// Parse bytes produced by `write_to`.
    pub fn parse(data: &[u8]) -> Result<Bitmap, String> {
        if data.len() < 20 {
            return Err("bitmap shorter than its header".into());
        }
        if &data[..4] != BITMAP_MAGIC {
            return Err(format!("bad magic {:02x?}", &data[..4]));
        }
        let lo = u64::from_le_bytes(data[4..12].try_into().unwrap());
        let count = u64::from_le_bytes(data[12..20].try_into().unwrap());
        let expect = (count as usize).div_ceil(8);
        let body = &data[20..];
        if body.len() != expect {
            return Err(format!(
                "bitmap body is {} bytes, expected {expect} for count {count}",
                body.len()
            ));
        }
        Ok(Bitmap {
            lo,
            count,
            bytes: body.to_vec(),
        })
    }
}

/// Write one decimal value per line.
pub fn write_text<W: Write>(values: impl Iterator<Item = u64>, w: &mut W) -> io::Result<()> {
    for v in values {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bitmap_layout_is_pinned() {
        let mut bm = Bitmap::new(100, 10);
        bm.mark(101);
        bm.mark(103);
        bm.mark(107);
        bm.mark(109);
        let mut buf = Vec::new();
        bm.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"PBM1");
        assert_eq!(buf[4..12], 100u64.to_le_bytes());
        assert_eq!(buf[12..20], 10u64.to_le_bytes());
        // 101, 103, 107 are offsets 1, 3, 7 in byte 0; 109 is bit 1 of byte 1.
        assert_eq!(&buf[20..], &[0b1000_1010, 0b0000_0010]);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Bitmap::parse(b"PBM1").is_err());
        assert!(Bitmap::parse(b"XXXX0000000000000000").is_err());
        let mut buf = Vec::new();
        Bitmap::new(7, 9).write_to(&mut buf).unwrap();
        buf.push(0);
        assert!(Bitmap::parse(&buf).is_err());
    }

    proptest! {
        #[test]
        fn bitmap_round_trips(lo in 0u64..10_000, count in 1u64..500, seed in any::<u64>()) {
            let mut bm = Bitmap::new(lo, count);
            let mut marked = Vec::new();
            let mut state = seed | 1;
            for v in lo..lo + count {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if state >> 63 == 1 {
                    bm.mark(v);
                    marked.push(v);
                }
            }
            let mut buf = Vec::new();
            bm.write_to(&mut buf).unwrap();
            let parsed = Bitmap::parse(&buf).unwrap();
            prop_assert_eq!(&parsed, &bm);
            prop_assert_eq!(parsed.marked(), marked);
        }
    }
}
