//! Range successor queries and sorted reporting by repeated successors.
//!
//! Every internal node `v` of the compact range tree keeps a range-extremum
//! index over the x-coordinates of `S(v)` (in y order). A successor query
//! `[a, +inf) x [c, d]` walks the search path toward leaf `a`, binary
//! searches the path's levels for the lowest node whose `S(v)` meets the
//! query (probing the maximum x in `S(v)[c_v..d_v]`), and then answers with
//! the minimum x in the right sibling of that node's on-path child. The
//! predecessor query is the mirror image and shares the same tables.

use std::iter::FusedIterator;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{rank_space_reduce, Point, QueryRect, RankSpaceMap};
use crate::probe;
use crate::range_tree::{Child, CompactRangeTree, NodeRef};
use crate::succinct::{Extremum, RmqIndex, RmqMode};

/// How the materialization stride of the compact tree is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum StridePolicy {
    /// A fixed stride.
    Fixed(u32),
    /// `ceil(log2 log2 n)`.
    LogLog,
    /// `ceil(eps * log2 n)`.
    EpsLog(f64),
}

impl StridePolicy {
    pub fn resolve(self, n: usize) -> u32 {
        let log_n = (n.max(2) as f64).log2();
        let s = match self {
            StridePolicy::Fixed(s) => return s.max(1),
            StridePolicy::LogLog => log_n.log2().ceil(),
            StridePolicy::EpsLog(eps) => (eps * log_n).ceil(),
        };
        (s as u32).max(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuccessorIndex {
    tree: CompactRangeTree,
    /// `rmq[level][offset]` for every internal node with a nonempty set.
    rmq: Vec<Vec<RmqIndex>>,
    map: RankSpaceMap,
}

/// Which way a search runs: successor (min x `>= a`) or predecessor
/// (max x `<= b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Toward {
    Successor,
    Predecessor,
}

impl SuccessorIndex {
    /// Reduces `points` to rank space and builds the index.
    pub fn build(points: &[Point], stride: u32) -> Result<Self> {
        let (reduced, map) = rank_space_reduce(points)?;
        let tree = CompactRangeTree::build(&reduced, stride)?;
        Ok(Self::from_tree(tree, map))
    }

    pub fn from_tree(tree: CompactRangeTree, map: RankSpaceMap) -> Self {
        let mut rmq = Vec::with_capacity(tree.depth() as usize);
        for level in 0..tree.depth() {
            let mut row = Vec::new();
            for offset in 0..1usize << level {
                let v = NodeRef::new(level, offset);
                let len = tree.node_len(v);
                if len == 0 {
                    break;
                }
                let xs: Vec<u32> = (0..len).map(|i| tree.decode_x(v, i) as u32).collect();
                row.push(RmqIndex::build(&xs, RmqMode::Both));
            }
            rmq.push(row);
        }
        SuccessorIndex { tree, rmq, map }
    }

    pub(crate) fn from_parts(tree: CompactRangeTree, rmq: Vec<Vec<RmqIndex>>, map: RankSpaceMap) -> Self {
        SuccessorIndex { tree, rmq, map }
    }

    pub(crate) fn rmq_tables(&self) -> &[Vec<RmqIndex>] {
        &self.rmq
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn tree(&self) -> &CompactRangeTree {
        &self.tree
    }

    pub fn map(&self) -> &RankSpaceMap {
        &self.map
    }

    /// All points in rank space, by x.
    pub fn rank_points(&self) -> Vec<Point> {
        (0..self.len()).map(|x| self.tree.point_at_x(x)).collect()
    }

    /// All points in original coordinates, by id.
    pub fn original_points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.rank_points().into_iter().map(|p| self.map.to_original(p)).collect();
        pts.sort_by_key(|p| p.id);
        pts
    }

    /// Extreme x position in `S(v)[r]`; `v` must be internal.
    fn node_extreme(&self, v: NodeRef, r: &std::ops::Range<usize>, e: Extremum) -> usize {
        probe::rmq_probe();
        self.rmq[v.level as usize][v.offset].query_with(r.start, r.end - 1, e, |t| {
            self.tree.decode_x(v, t)
        })
    }

    /// Minimum-x point with `x >= a` and `c <= y <= d` (rank space).
    pub fn range_successor(&self, a: i64, c: i64, d: i64) -> Option<Point> {
        self.search(Toward::Successor, a, c, d)
    }

    /// Maximum-x point with `x <= b` and `c <= y <= d` (rank space).
    pub fn range_predecessor(&self, b: i64, c: i64, d: i64) -> Option<Point> {
        self.search(Toward::Predecessor, b, c, d)
    }

    fn search(&self, dir: Toward, a: i64, c: i64, d: i64) -> Option<Point> {
        let n = self.len() as i64;
        let a = match dir {
            Toward::Successor if a > n => return None,
            Toward::Successor => a.max(1),
            Toward::Predecessor if a < 1 => return None,
            Toward::Predecessor => a.min(n),
        };
        let (c, d) = (c.max(1), d.min(n));
        if c > d {
            return None;
        }
        let t = &self.tree;
        let depth = t.depth();
        let leaf = (a - 1) as usize;
        let on_path = |level: u32| NodeRef::new(level, leaf >> (depth - level));
        let bit_at = |level: u32| (leaf >> (depth - level - 1)) & 1;

        // y-ranges of the query inside S(v) for every v on the path.
        let mut ranges = Vec::with_capacity(depth as usize + 1);
        ranges.push(t.noderange(c, d, t.root()));
        for level in 0..depth {
            let child = if bit_at(level) == 1 { Child::Right } else { Child::Left };
            let r = t.translate(on_path(level), child, ranges[level as usize].clone());
            ranges.push(r);
        }

        // Does S(v) meet the query on the path node at `level`?
        let meets = |level: u32| -> bool {
            probe::node_visit();
            let r = &ranges[level as usize];
            if r.is_empty() {
                return false;
            }
            if level == depth {
                return true;
            }
            let v = on_path(level);
            match dir {
                Toward::Successor => {
                    let i = self.node_extreme(v, r, Extremum::Max);
                    t.decode_x(v, i) as i64 + 1 >= a
                }
                Toward::Predecessor => {
                    let i = self.node_extreme(v, r, Extremum::Min);
                    (t.decode_x(v, i) as i64) < a
                }
            }
        };

        if meets(depth) {
            return Some(t.point_at_x(leaf));
        }
        if depth == 0 || !meets(0) {
            return None;
        }
        let (mut lo, mut hi) = (0u32, depth);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if meets(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }

        // The on-path child of the lowest meeting node lies on the side
        // away from the answer; the answer is in its sibling.
        let (expect_bit, side, e) = match dir {
            Toward::Successor => (0, Child::Right, Extremum::Min),
            Toward::Predecessor => (1, Child::Left, Extremum::Max),
        };
        assert_eq!(bit_at(lo), expect_bit, "search path child is on the wrong side");
        let meet = on_path(lo);
        let sib = NodeRef::new(lo + 1, 2 * meet.offset + (side == Child::Right) as usize);
        let r = t.translate(meet, side, ranges[lo as usize].clone());
        debug_assert!(!r.is_empty());
        probe::node_visit();
        if sib.level == depth {
            return Some(t.point_at_x(sib.offset));
        }
        let i = self.node_extreme(sib, &r, e);
        Some(t.point_unchecked(sib, i))
    }

    /// Streams the points of a rank-space rectangle in ascending x, one
    /// successor query per point.
    pub fn sorted_iter(&self, q: &QueryRect) -> SortedIter<'_> {
        match q.clamp_to_grid(self.len()) {
            Some(g) => SortedIter {
                idx: self,
                next_x: g.x_lo as i64,
                x_hi: g.x_hi as i64,
                y_lo: g.y_lo as i64,
                y_hi: g.y_hi as i64,
                done: false,
            },
            None => SortedIter { idx: self, next_x: 1, x_hi: 0, y_lo: 1, y_hi: 0, done: true },
        }
    }

    pub fn size_in_bytes(&self) -> usize {
        self.tree.size_in_bytes()
            + self.rmq.iter().flatten().map(RmqIndex::size_in_bytes).sum::<usize>()
            + 16 * self.len()
    }
}

/// Online sorted reporting over a [`SuccessorIndex`]. Emits rank-space
/// points in strictly ascending x.
#[derive(Clone, Debug)]
pub struct SortedIter<'a> {
    idx: &'a SuccessorIndex,
    next_x: i64,
    x_hi: i64,
    y_lo: i64,
    y_hi: i64,
    done: bool,
}

impl Iterator for SortedIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.done {
            return None;
        }
        match self.idx.range_successor(self.next_x, self.y_lo, self.y_hi) {
            Some(p) if p.x <= self.x_hi => {
                // Strict successor: never re-reports x even if coordinates repeat.
                self.next_x = p.x + 1;
                Some(p)
            }
            _ => {
                self.done = true;
                None
            }
        }
    }
}

impl FusedIterator for SortedIter<'_> {}
