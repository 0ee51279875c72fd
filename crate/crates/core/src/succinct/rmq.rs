//! Range minimum / maximum queries in constant time.
//!
//! The array is cut into blocks of 32 entries. Inside a block every position
//! `j` keeps a 32-bit mask of the offsets `t <= j` whose value beats-or-ties
//! everything in `(t, j]`; the lowest such offset at or after `i` is the
//! answer for `[i, j]`. A sparse table over block winners covers whole
//! blocks. Ties always resolve to the leftmost index.
//!
//! [`RmqIndex`] holds only indices. Its queries take a value accessor, so a
//! caller can keep the values implicit (e.g. decode them from a compact
//! tree). [`RangeMinMax`] bundles an index with an owned value array.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BLOCK: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Extremum {
    Min,
    Max,
}

/// Which extremum tables to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RmqMode {
    Min,
    Max,
    Both,
}

impl RmqMode {
    fn has(self, e: Extremum) -> bool {
        matches!(
            (self, e),
            (RmqMode::Both, _) | (RmqMode::Min, Extremum::Min) | (RmqMode::Max, Extremum::Max)
        )
    }
}

/// `a` wins against `b` under `e` with leftmost tie-breaking.
#[inline]
fn wins<T: Ord>(e: Extremum, a: usize, va: &T, b: usize, vb: &T) -> bool {
    match e {
        Extremum::Min => (va, a) < (vb, b),
        Extremum::Max => va > vb || (va == vb && a < b),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Side {
    masks: Vec<u32>,
    /// `sparse[k][b]` is the winning index over blocks `b .. b + 2^k`.
    sparse: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RmqIndex {
    len: usize,
    min: Option<Side>,
    max: Option<Side>,
}

impl RmqIndex {
    /// Builds the tables. Values are only read during construction.
    pub fn build<T: Ord>(values: &[T], mode: RmqMode) -> Self {
        let side = |e| mode.has(e).then(|| Side::build(values, e));
        RmqIndex { len: values.len(), min: side(Extremum::Min), max: side(Extremum::Max) }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn supports(&self, e: Extremum) -> bool {
        self.side(e).is_some()
    }

    fn side(&self, e: Extremum) -> Option<&Side> {
        match e {
            Extremum::Min => self.min.as_ref(),
            Extremum::Max => self.max.as_ref(),
        }
    }

    /// Index of the extreme value in `[i, j]` (inclusive). `value(t)` must
    /// return the value the tables were built from.
    ///
    /// Panics if the requested extremum was not built or the range is
    /// invalid.
    pub fn query_with<T: Ord, F: Fn(usize) -> T>(
        &self,
        i: usize,
        j: usize,
        e: Extremum,
        value: F,
    ) -> usize {
        assert!(i <= j && j < self.len, "rmq range [{i}, {j}] invalid for length {}", self.len);
        let side = self.side(e).expect("extremum not built");
        let (bi, bj) = (i / BLOCK, j / BLOCK);
        if bi == bj {
            return side.in_block(i, j);
        }
        let mut best = side.in_block(i, bi * BLOCK + BLOCK - 1);
        let mut best_v = value(best);
        let mut consider = |t: usize| {
            let v = value(t);
            if wins(e, t, &v, best, &best_v) {
                best = t;
                best_v = v;
            }
        };
        if bj > bi + 1 {
            let (lo, hi) = (bi + 1, bj - 1);
            let k = (hi - lo + 1).ilog2() as usize;
            consider(side.sparse[k][lo] as usize);
            consider(side.sparse[k][hi + 1 - (1 << k)] as usize);
        }
        consider(side.in_block(bj * BLOCK, j));
        best
    }

    /// Number of 32-bit table entries: `(mask entries, sparse entries)` per
    /// built side, summed.
    pub fn table_entries(&self) -> (usize, usize) {
        [&self.min, &self.max]
            .into_iter()
            .flatten()
            .fold((0, 0), |(m, s), side| {
                (m + side.masks.len(), s + side.sparse.iter().map(Vec::len).sum::<usize>())
            })
    }

    pub fn size_in_bytes(&self) -> usize {
        let (m, s) = self.table_entries();
        4 * (m + s)
    }
}

/// Sparse-table entry count for one side over `n` values: with
/// `nb = ceil(n / 32)` blocks, level `k` holds `nb - 2^k + 1` entries for
/// every `2^k <= nb`.
pub fn sparse_entries_formula(n: usize) -> usize {
    let nb = n.div_ceil(BLOCK);
    if nb == 0 {
        return 0;
    }
    (0..=nb.ilog2()).map(|k| nb - (1usize << k) + 1).sum()
}

impl Side {
    fn build<T: Ord>(values: &[T], e: Extremum) -> Side {
        let n = values.len();
        let mut masks = vec![0u32; n];
        let mut stack: Vec<usize> = Vec::with_capacity(BLOCK);
        for start in (0..n).step_by(BLOCK) {
            stack.clear();
            let mut mask = 0u32;
            for j in start..(start + BLOCK).min(n) {
                while let Some(&top) = stack.last() {
                    // `top` stays a candidate while it still beats-or-ties `j`.
                    if wins(e, j, &values[j], top, &values[top]) {
                        stack.pop();
                        mask &= !(1 << (top - start));
                    } else {
                        break;
                    }
                }
                stack.push(j);
                mask |= 1 << (j - start);
                masks[j] = mask;
            }
        }

        let nb = n.div_ceil(BLOCK);
        let mut side = Side { masks, sparse: Vec::new() };
        if nb == 0 {
            return side;
        }
        let level0: Vec<u32> = (0..nb)
            .map(|b| side.in_block(b * BLOCK, ((b + 1) * BLOCK).min(n) - 1) as u32)
            .collect();
        side.sparse.push(level0);
        let mut k = 1;
        while (1usize << k) <= nb {
            let prev = &side.sparse[k - 1];
            let half = 1usize << (k - 1);
            let level: Vec<u32> = (0..=nb - (1 << k))
                .map(|b| {
                    let (a, c) = (prev[b] as usize, prev[b + half] as usize);
                    if wins(e, c, &values[c], a, &values[a]) {
                        c as u32
                    } else {
                        a as u32
                    }
                })
                .collect();
            side.sparse.push(level);
            k += 1;
        }
        side
    }

    #[inline]
    fn in_block(&self, i: usize, j: usize) -> usize {
        let start = j - j % BLOCK;
        let m = self.masks[j] & (u32::MAX << (i - start));
        start + m.trailing_zeros() as usize
    }
}

/// Range extremum structure that owns its values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeMinMax<T> {
    values: Vec<T>,
    index: RmqIndex,
}

impl<T: Ord + Copy> RangeMinMax<T> {
    pub fn build(values: Vec<T>, mode: RmqMode) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let index = RmqIndex::build(&values, mode);
        Ok(RangeMinMax { values, index })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Leftmost index of the extreme value in `[i, j]`.
    pub fn query(&self, i: usize, j: usize, e: Extremum) -> Result<usize> {
        if j >= self.values.len() {
            return Err(Error::OutOfRange { index: j, len: self.values.len() });
        }
        if i > j {
            return Err(Error::InvalidQuery(format!("rmq range [{i}, {j}] is inverted")));
        }
        if !self.index.supports(e) {
            return Err(Error::Config(format!("{e:?} queries were not built")));
        }
        Ok(self.index.query_with(i, j, e, |t| self.values[t]))
    }

    pub fn index(&self) -> &RmqIndex {
        &self.index
    }
}
