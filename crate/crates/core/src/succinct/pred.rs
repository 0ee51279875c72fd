use serde::{Deserialize, Serialize};

use crate::probe;

/// Static predecessor / successor dictionary over small integer keys.
///
/// Keys are kept sorted and bucketed by their high bits; the bucket count is
/// about the number of keys, and a directory records where each bucket
/// starts. A lookup jumps to its bucket and searches only inside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredecessorSet {
    keys: Vec<u32>,
    shift: u32,
    dir: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Largest key `<= q`.
    Pred,
    /// Smallest key `>= q`.
    Succ,
}

fn bit_len(v: u64) -> u32 {
    64 - v.leading_zeros()
}

impl PredecessorSet {
    pub fn new<I: IntoIterator<Item = u32>>(keys: I) -> Self {
        let mut keys: Vec<u32> = keys.into_iter().collect();
        keys.sort_unstable();
        keys.dedup();
        let max = keys.last().copied().unwrap_or(0) as u64;
        let shift = bit_len(max).saturating_sub(bit_len(keys.len() as u64));
        let buckets = (max >> shift) as usize + 1;
        let mut dir = vec![0u32; buckets + 1];
        for &k in &keys {
            dir[(k >> shift) as usize + 1] += 1;
        }
        for b in 1..dir.len() {
            dir[b] += dir[b - 1];
        }
        PredecessorSet { keys, shift, dir }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[u32] {
        &self.keys
    }

    fn bucket(&self, q: u32) -> (usize, usize) {
        let b = (q >> self.shift) as usize;
        (self.dir[b] as usize, self.dir[b + 1] as usize)
    }

    /// Position (in sorted order) of the smallest key `>= q`.
    pub fn succ_index(&self, q: i64) -> Option<usize> {
        probe::pred_probe();
        let &max = self.keys.last()?;
        if q > max as i64 {
            return None;
        }
        if q <= self.keys[0] as i64 {
            return Some(0);
        }
        let q = q as u32;
        let (lo, hi) = self.bucket(q);
        Some(lo + self.keys[lo..hi].partition_point(|&k| k < q))
    }

    /// Position of the largest key `<= q`.
    pub fn pred_index(&self, q: i64) -> Option<usize> {
        probe::pred_probe();
        let &max = self.keys.last()?;
        if q < self.keys[0] as i64 {
            return None;
        }
        if q >= max as i64 {
            return Some(self.keys.len() - 1);
        }
        let q = q as u32;
        let (lo, hi) = self.bucket(q);
        Some(lo + self.keys[lo..hi].partition_point(|&k| k <= q) - 1)
    }

    pub fn succ(&self, q: i64) -> Option<u32> {
        self.succ_index(q).map(|i| self.keys[i])
    }

    pub fn pred(&self, q: i64) -> Option<u32> {
        self.pred_index(q).map(|i| self.keys[i])
    }

    pub fn query(&self, q: i64, dir: Direction) -> Option<u32> {
        match dir {
            Direction::Pred => self.pred(q),
            Direction::Succ => self.succ(q),
        }
    }

    pub fn size_in_bytes(&self) -> usize {
        4 * (self.keys.len() + self.dir.len())
    }
}
