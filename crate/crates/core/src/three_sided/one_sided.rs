//! Sorted reporting of `{p : p.y <= c}` in ascending x.
//!
//! Two routes produce the same stream:
//!
//! * every point `p` keeps a leftmost list, the `list_len` smallest-x
//!   points among those with y at most `p.y`; a query locates the pivot
//!   (the highest point with `y <= c`) and reads its list;
//! * a range tree over y-ranks keeps each node's points sorted by x; the
//!   prefix `[0, below)` of y-ranks splits into at most one node per level
//!   and a heap merges those lists.
//!
//! The iterator serves the first `list_len` points from the pivot's list
//! and falls back to the merge (skipping what was already emitted) only
//! when more are requested. When `c` lies among the `small_len` lowest
//! points, the pivot is found by scanning them instead of probing the
//! predecessor dictionary.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::iter::FusedIterator;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Point;
use crate::succinct::PredecessorSet;

pub(crate) fn ceil_log2(n: usize) -> usize {
    (n.max(2) as f64).log2().ceil() as usize
}

pub(crate) fn ceil_loglog(n: usize) -> usize {
    ((ceil_log2(n) as f64).log2().ceil() as usize).max(1)
}

/// Sizes of the per-point lists and of the small-set fast path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneSidedParams {
    pub list_len: usize,
    pub small_len: usize,
}

impl OneSidedParams {
    /// `ceil(log n)` and `ceil(log log n)`.
    pub fn for_n(n: usize) -> Self {
        OneSidedParams { list_len: ceil_log2(n), small_len: ceil_loglog(n) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneSidedIndex {
    params: OneSidedParams,
    /// Points ascending by y; a point's position is its y-rank.
    by_y: Vec<Point>,
    pred: PredecessorSet,
    /// y of the `small_len` lowest points.
    small: Vec<u32>,
    /// `lists[level]`: y-ranks, each tree node's segment sorted by x.
    lists: Vec<Vec<u32>>,
    /// The leftmost list of y-rank `r` lives at `leftmost[r * list_len ..]`,
    /// length `min(list_len, r + 1)`.
    leftmost: Vec<u32>,
}

impl OneSidedIndex {
    pub fn build(points: &[Point]) -> Result<Self> {
        Self::with_params(points, OneSidedParams::for_n(points.len()))
    }

    /// Coordinates must be distinct per axis and fit in `0..=u32::MAX`.
    pub fn with_params(points: &[Point], params: OneSidedParams) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if params.list_len == 0 || params.small_len == 0 {
            return Err(Error::Config("list sizes must be positive".into()));
        }
        if points.iter().any(|p| p.y < 0 || p.y > u32::MAX as i64) {
            return Err(Error::Config("y coordinates must fit in u32".into()));
        }
        let mut by_y = points.to_vec();
        by_y.sort_by_key(|p| p.y);
        if by_y.windows(2).any(|w| w[0].y == w[1].y) {
            return Err(Error::Config("y coordinates must be distinct".into()));
        }
        let m = by_y.len();
        let pred = PredecessorSet::new(by_y.iter().map(|p| p.y as u32));
        let small = by_y.iter().take(params.small_len).map(|p| p.y as u32).collect();

        let size = m.next_power_of_two();
        let levels = size.ilog2() as usize + 1;
        let mut lists = Vec::with_capacity(levels);
        for level in 0..levels {
            let w = size >> level;
            let mut row: Vec<u32> = (0..m as u32).collect();
            for chunk in row.chunks_mut(w) {
                chunk.sort_by_key(|&r| by_y[r as usize].x);
            }
            lists.push(row);
        }

        let v = params.list_len;
        let mut leftmost = vec![0u32; m * v];
        let mut cur: Vec<u32> = Vec::with_capacity(v + 1);
        for r in 0..m {
            let x = by_y[r].x;
            let at = cur.partition_point(|&q| by_y[q as usize].x < x);
            cur.insert(at, r as u32);
            cur.truncate(v);
            leftmost[r * v..r * v + cur.len()].copy_from_slice(&cur);
        }

        Ok(OneSidedIndex { params, by_y, pred, small, lists, leftmost })
    }

    pub fn len(&self) -> usize {
        self.by_y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_y.is_empty()
    }

    pub fn params(&self) -> OneSidedParams {
        self.params
    }

    /// Points ascending by y.
    pub fn points_by_y(&self) -> &[Point] {
        &self.by_y
    }

    pub fn lowest(&self) -> Point {
        self.by_y[0]
    }

    /// The leftmost list of the point of y-rank `rank`.
    pub fn leftmost_list(&self, rank: usize) -> impl Iterator<Item = Point> + '_ {
        let len = self.params.list_len.min(rank + 1);
        let base = rank * self.params.list_len;
        self.leftmost[base..base + len].iter().map(|&r| self.by_y[r as usize])
    }

    /// Number of points with `y <= c`.
    pub fn count_at_most(&self, c: i64) -> usize {
        let hits = self.small.iter().take_while(|&&y| (y as i64) <= c).count();
        if hits < self.small.len() || self.small.len() == self.by_y.len() {
            return hits;
        }
        self.pred.pred_index(c).map_or(0, |i| i + 1)
    }

    /// True when `count_at_most(c)` is answered from the small set alone.
    pub fn answered_by_small_set(&self, c: i64) -> bool {
        let hits = self.small.iter().take_while(|&&y| (y as i64) <= c).count();
        hits < self.small.len() || self.small.len() == self.by_y.len()
    }

    /// Points with `y <= c`, ascending by x.
    pub fn iter(&self, c: i64) -> OneSidedIter<'_> {
        self.iter_from_count(self.count_at_most(c))
    }

    /// Same stream as [`iter`](Self::iter) for any `c` whose highest point
    /// with `y <= c` is `pivot`.
    pub fn hinted_iter(&self, pivot: Point) -> OneSidedIter<'_> {
        let rank = self.by_y.partition_point(|p| p.y < pivot.y);
        debug_assert!(
            rank < self.by_y.len() && self.by_y[rank].id == pivot.id,
            "hint is not a point of this index"
        );
        self.iter_from_count(rank + 1)
    }

    fn iter_from_count(&self, below: usize) -> OneSidedIter<'_> {
        let state = if below == 0 {
            State::Done
        } else {
            State::List { rank: below - 1, pos: 0 }
        };
        OneSidedIter { idx: self, below, emitted: 0, state }
    }

    /// The merge route only, bypassing the pivot's list.
    pub fn merge_iter(&self, c: i64) -> OneSidedIter<'_> {
        let below = self.count_at_most(c);
        let state = if below == 0 { State::Done } else { self.merge_state(below, 0) };
        OneSidedIter { idx: self, below, emitted: 0, state }
    }

    fn merge_state(&self, below: usize, skip: usize) -> State {
        let size = self.by_y.len().next_power_of_two();
        let mut heap = BinaryHeap::new();
        let mut pos = 0;
        for (level, row) in self.lists.iter().enumerate() {
            let w = size >> level;
            if pos + w <= below {
                let x = self.by_y[row[pos] as usize].x;
                heap.push(Reverse((x, level as u32, pos as u32, (pos + w) as u32)));
                pos += w;
            }
        }
        debug_assert_eq!(pos, below);
        State::Merge { heap, skip }
    }

    pub fn size_in_bytes(&self) -> usize {
        self.by_y.len() * std::mem::size_of::<Point>()
            + self.pred.size_in_bytes()
            + 4 * (self.small.len() + self.leftmost.len())
            + self.lists.iter().map(|l| 4 * l.len()).sum::<usize>()
    }
}

#[derive(Clone, Debug)]
enum State {
    List { rank: usize, pos: usize },
    Merge { heap: BinaryHeap<Reverse<(i64, u32, u32, u32)>>, skip: usize },
    Done,
}

/// One-sided sorted stream. Single consumer.
#[derive(Clone, Debug)]
pub struct OneSidedIter<'a> {
    idx: &'a OneSidedIndex,
    below: usize,
    emitted: usize,
    state: State,
}

impl OneSidedIter<'_> {
    /// Points with `y <= c` that have not been emitted yet.
    pub fn remaining(&self) -> usize {
        self.below - self.emitted
    }

    pub fn total(&self) -> usize {
        self.below
    }

    fn pop_merge(&mut self) -> Option<Point> {
        let State::Merge { heap, .. } = &mut self.state else { return None };
        let Reverse((_, level, pos, end)) = heap.pop()?;
        let row = &self.idx.lists[level as usize];
        let p = self.idx.by_y[row[pos as usize] as usize];
        if pos + 1 < end {
            let x = self.idx.by_y[row[pos as usize + 1] as usize].x;
            heap.push(Reverse((x, level, pos + 1, end)));
        }
        Some(p)
    }
}

impl Iterator for OneSidedIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        loop {
            match &mut self.state {
                State::Done => return None,
                State::List { rank, pos } => {
                    let len = self.idx.params.list_len.min(*rank + 1);
                    if *pos < len {
                        let r = self.idx.leftmost[*rank * self.idx.params.list_len + *pos];
                        *pos += 1;
                        self.emitted += 1;
                        return Some(self.idx.by_y[r as usize]);
                    }
                    self.state = if self.emitted < self.below {
                        self.idx.merge_state(self.below, self.emitted)
                    } else {
                        State::Done
                    };
                }
                State::Merge { skip, .. } => {
                    if *skip > 0 {
                        *skip -= 1;
                        self.pop_merge();
                        continue;
                    }
                    return match self.pop_merge() {
                        Some(p) => {
                            self.emitted += 1;
                            Some(p)
                        }
                        None => {
                            self.state = State::Done;
                            None
                        }
                    };
                }
            }
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining(), Some(self.remaining()))
    }
}

impl FusedIterator for OneSidedIter<'_> {}
