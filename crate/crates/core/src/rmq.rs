//! Range-argmax in O(1) per query with linear space.
//!
//! The sequence is cut into blocks of 64. Inside a block, each position keeps
//! a bitmask of the monotonic stack of "still maximal" positions seen so far;
//! a sparse table over per-block maxima answers the part spanning whole
//! blocks. Ties resolve to the smaller index everywhere.

use crate::error::{Error, Result};

const BLOCK: usize = 64;

#[derive(Debug, Clone)]
pub struct RangeArgmax {
    values: Vec<f64>,
    masks: Vec<u64>,
    /// `table[k][b]`: argmax over blocks `b .. b + 2^k`.
    table: Vec<Vec<u32>>,
}

impl RangeArgmax {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        assert!(values.len() <= u32::MAX as usize, "sequence too long for range argmax");
        let n = values.len();
        let mut masks = vec![0u64; n];
        for start in (0..n).step_by(BLOCK) {
            let mut stack = 0u64;
            for (off, i) in (start..n.min(start + BLOCK)).enumerate() {
                while stack != 0 {
                    let top = 63 - stack.leading_zeros() as usize;
                    if values[start + top] < values[i] {
                        stack &= !(1u64 << top);
                    } else {
                        break;
                    }
                }
                stack |= 1u64 << off;
                masks[i] = stack;
            }
        }

        let mut rmq = Self { values, masks, table: Vec::new() };
        let blocks = n.div_ceil(BLOCK);
        let base: Vec<u32> =
            (0..blocks).map(|b| rmq.in_block(b * BLOCK, ((b + 1) * BLOCK).min(n) - 1) as u32).collect();
        rmq.table.push(base);
        let mut width = 1;
        while 2 * width <= blocks {
            let prev = rmq.table.last().unwrap();
            let next: Vec<u32> = (0..=blocks - 2 * width)
                .map(|b| rmq.better(prev[b] as usize, prev[b + width] as usize) as u32)
                .collect();
            rmq.table.push(next);
            width *= 2;
        }
        Ok(rmq)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    fn better(&self, a: usize, b: usize) -> usize {
        let (va, vb) = (self.values[a], self.values[b]);
        if vb > va || (vb == va && b < a) {
            b
        } else {
            a
        }
    }

    #[inline]
    fn in_block(&self, i: usize, j: usize) -> usize {
        let start = i - i % BLOCK;
        let live = self.masks[j] & (u64::MAX << (i - start));
        start + live.trailing_zeros() as usize
    }

    /// Index of a maximum over `values[i..=j]`, smallest index on ties.
    pub fn query(&self, i: usize, j: usize) -> Result<usize> {
        let n = self.values.len();
        if i > j || j >= n {
            return Err(Error::InvalidRange { i, j, n });
        }
        let (bi, bj) = (i / BLOCK, j / BLOCK);
        if bi == bj {
            return Ok(self.in_block(i, j));
        }
        let mut best = self.in_block(i, bi * BLOCK + BLOCK - 1);
        if bj > bi + 1 {
            let (lo, hi) = (bi + 1, bj - 1);
            let level = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
            let row = &self.table[level];
            best = self.better(best, row[lo] as usize);
            best = self.better(best, row[hi + 1 - (1 << level)] as usize);
        }
        Ok(self.better(best, self.in_block(bj * BLOCK, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(values: &[f64], i: usize, j: usize) -> usize {
        let mut best = i;
        for k in i..=j {
            if values[k] > values[best] {
                best = k;
            }
        }
        best
    }

    #[test]
    fn small_examples() {
        let r = RangeArgmax::new(vec![0.0, 1.0, 1.0, 2.0]).unwrap();
        assert_eq!(r.query(1, 3).unwrap(), 3);
        assert_eq!(r.query(1, 2).unwrap(), 1);
        for i in 0..4 {
            assert_eq!(r.query(i, i).unwrap(), i);
        }
        assert!(matches!(r.query(2, 1), Err(Error::InvalidRange { .. })));
        assert!(matches!(r.query(0, 4), Err(Error::InvalidRange { .. })));
        assert!(matches!(RangeArgmax::new(vec![]), Err(Error::EmptySequence)));
    }

    #[test]
    fn matches_naive_scan_on_random_arrays() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &n in &[1usize, 2, 63, 64, 65, 127, 128, 129, 500, 3000] {
            // few distinct values so ties are common
            let values: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..12))).collect();
            let r = RangeArgmax::new(values.clone()).unwrap();
            for _ in 0..1000 {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(i..n);
                assert_eq!(r.query(i, j).unwrap(), naive(&values, i, j), "n={n} [{i},{j}]");
            }
        }
    }
}
