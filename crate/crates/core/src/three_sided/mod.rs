//! Sorted reporting for three-sided rectangles `[a, b] x (-inf, c]` and
//! `[a, b] x [c, +inf)`.
//!
//! A range tree over x keeps a [`OneSidedIndex`] at every node. For every
//! root-to-leaf path two small tables record the lowest point of each node
//! hanging off the path: one for right siblings of on-path left children,
//! one for left siblings of on-path right children, each plus the leaf
//! itself. A query `[a, b]` walks the right-sibling table of the path to `a`
//! from the deepest level up (ascending x), then the left-sibling table of
//! the path to `b` from the top down, visiting only
//! nodes whose lowest point is below `c` and draining each node's one-sided
//! stream before moving on. Only the node being drained when the consumer
//! stops can be left with unreported points.
//!
//! `[a, b] x [c, +inf)` is served by a second copy built over `y -> K - y`.

mod one_sided;
mod path;

use std::iter::FusedIterator;

use serde::{Deserialize, Serialize};

pub use one_sided::{OneSidedIndex, OneSidedIter, OneSidedParams};
#[allow(unused_imports)]
pub(crate) use one_sided::{ceil_log2, ceil_loglog};
use path::PathTable;

use crate::error::{Error, Result};
use crate::model::{rank_space_reduce, Point, QueryRect, RankSpaceMap};
use crate::probe;
use crate::range_tree::NodeRef;

/// Which y side of a three-sided query is bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum YLimit {
    /// `y <= c`: `c` is an upper limit.
    Upper,
    /// `y >= c`: `c` is a lower limit.
    Lower,
}

/// Three-sided structure for one orientation over points with distinct
/// coordinates in `0..=u32::MAX`. Works directly on the given coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeSided {
    limit: YLimit,
    /// `y -> flip - y` for [`YLimit::Lower`].
    flip: i64,
    depth: u32,
    /// Point x-coordinates ascending; a point's position is its leaf.
    xs: Vec<i64>,
    /// `nodes[level][offset]`, nonempty nodes only.
    nodes: Vec<Vec<OneSidedIndex>>,
    right_siblings: PathTable,
    left_siblings: PathTable,
    small_len: usize,
}

/// Record of one node visited by a three-sided query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeVisit {
    pub node: NodeRef,
    pub emitted: usize,
    /// Points of `S(v)` inside the query.
    pub in_range: usize,
}

impl NodeVisit {
    pub fn exhausted(&self) -> bool {
        self.emitted == self.in_range
    }
}

impl ThreeSided {
    /// `scale_n` sets the list sizes of the per-node one-sided structures
    /// (`ceil(log n)` and `ceil(log log n)`).
    pub fn build(points: &[Point], limit: YLimit, scale_n: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if points.iter().any(|p| p.y < 0 || p.y >= u32::MAX as i64) {
            return Err(Error::Config("y coordinates must fit in u32".into()));
        }
        let flip = match limit {
            YLimit::Upper => 0,
            YLimit::Lower => points.iter().map(|p| p.y).max().unwrap_or(0) + 1,
        };
        let mut pts: Vec<Point> = points
            .iter()
            .map(|p| Point { y: if flip == 0 { p.y } else { flip - p.y }, ..*p })
            .collect();
        pts.sort_by_key(|p| p.x);
        if pts.windows(2).any(|w| w[0].x == w[1].x) {
            return Err(Error::Config("x coordinates must be distinct".into()));
        }
        let m = pts.len();
        let depth = m.next_power_of_two().ilog2();
        let params = OneSidedParams::for_n(scale_n.max(m));

        let mut nodes = Vec::with_capacity(depth as usize + 1);
        for level in 0..=depth {
            let w = 1usize << (depth - level);
            let row = pts
                .chunks(w)
                .map(|chunk| OneSidedIndex::with_params(chunk, params))
                .collect::<Result<Vec<_>>>()?;
            nodes.push(row);
        }
        let lowest = |level: u32, offset: usize| -> Option<Point> {
            nodes[level as usize].get(offset).map(OneSidedIndex::lowest)
        };
        let right_siblings = PathTable::build(m, depth, true, lowest);
        let left_siblings = PathTable::build(m, depth, false, lowest);

        Ok(ThreeSided {
            limit,
            flip,
            depth,
            xs: pts.iter().map(|p| p.x).collect(),
            nodes,
            right_siblings,
            left_siblings,
            small_len: params.small_len,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn limit(&self) -> YLimit {
        self.limit
    }

    /// `ceil(log log n)` used by the per-node structures.
    pub fn small_len(&self) -> usize {
        self.small_len
    }

    pub fn node(&self, v: NodeRef) -> &OneSidedIndex {
        &self.nodes[v.level as usize][v.offset]
    }

    /// Points with `a <= x <= b` and `y <= c` (upper limit) or `y >= c`
    /// (lower limit), ascending by x.
    pub fn query(&self, a: i64, b: i64, c: i64) -> ThreeSidedIter<'_> {
        let c = match self.limit {
            YLimit::Upper => c,
            YLimit::Lower => self.flip.saturating_sub(c),
        };
        let lo = self.xs.partition_point(|&x| x < a);
        let hi = self.xs.partition_point(|&x| x <= b);
        let mut it = ThreeSidedIter {
            idx: self,
            c,
            lo,
            hi: hi.saturating_sub(1),
            phase: Phase::Done,
            r_mask: 0,
            current: None,
            visits: Vec::new(),
        };
        if lo >= hi {
            return it;
        }
        let (lo, hi) = (lo, hi - 1);
        if lo == hi {
            it.phase = Phase::Single;
            return it;
        }
        // LCA at level `l`; nodes strictly below its children cover (a, b).
        let l = self.depth - (usize::BITS - (lo ^ hi).leading_zeros());
        let levels = path::levels_above(l + 1, self.depth);
        it.r_mask = self.right_siblings.mask(lo, c) & levels;
        it.phase = Phase::Left { levels };
        it
    }

    pub fn size_in_bytes(&self) -> usize {
        8 * self.xs.len()
            + self.nodes.iter().flatten().map(OneSidedIndex::size_in_bytes).sum::<usize>()
            + self.right_siblings.size_in_bytes()
            + self.left_siblings.size_in_bytes()
    }
}

#[derive(Clone, Copy, Debug)]
enum Phase {
    Single,
    Left { levels: u64 },
    Right,
    Done,
}

/// Three-sided sorted stream. Single consumer.
#[derive(Clone, Debug)]
pub struct ThreeSidedIter<'a> {
    idx: &'a ThreeSided,
    c: i64,
    lo: usize,
    hi: usize,
    phase: Phase,
    r_mask: u64,
    current: Option<OneSidedIter<'a>>,
    visits: Vec<NodeVisit>,
}

impl<'a> ThreeSidedIter<'a> {
    /// Nodes visited so far, with how much of each was reported.
    pub fn visits(&self) -> &[NodeVisit] {
        &self.visits
    }

    /// Visited nodes whose in-range points were not all reported.
    pub fn unexhausted_nodes(&self) -> usize {
        self.visits.iter().filter(|v| !v.exhausted()).count()
    }

    fn unflip(&self, p: Point) -> Point {
        match self.idx.limit {
            YLimit::Upper => p,
            YLimit::Lower => Point { y: self.idx.flip - p.y, ..p },
        }
    }

    fn open(&mut self, v: NodeRef) {
        probe::node_visit();
        let it = self.idx.node(v).iter(self.c);
        self.visits.push(NodeVisit { node: v, emitted: 0, in_range: it.total() });
        self.current = Some(it);
    }

    /// Node for path bit `bit` (a level, or `depth + 1` for the leaf itself).
    fn node_for(&self, leaf: usize, bit: u32, right_sibling: bool) -> NodeRef {
        let depth = self.idx.depth;
        if bit == depth + 1 {
            return NodeRef::new(depth, leaf);
        }
        let on_path = leaf >> (depth - bit);
        NodeRef::new(bit, if right_sibling { on_path + 1 } else { on_path - 1 })
    }
}

impl Iterator for ThreeSidedIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        loop {
            if let Some(cur) = &mut self.current {
                if let Some(p) = cur.next() {
                    self.visits.last_mut().unwrap().emitted += 1;
                    return Some(self.unflip(p));
                }
                self.current = None;
            }
            match self.phase {
                Phase::Done => return None,
                Phase::Single => {
                    self.phase = Phase::Done;
                    let v = NodeRef::new(self.idx.depth, self.lo);
                    if self.idx.node(v).lowest().y <= self.c {
                        self.open(v);
                    }
                }
                Phase::Left { levels } => {
                    if self.r_mask == 0 {
                        self.r_mask = self.idx.left_siblings.mask(self.hi, self.c) & levels;
                        self.phase = Phase::Right;
                        continue;
                    }
                    // deepest first: ascending x along the right side of path a
                    let bit = 63 - self.r_mask.leading_zeros();
                    self.r_mask &= !(1u64 << bit);
                    let v = self.node_for(self.lo, bit, true);
                    self.open(v);
                }
                Phase::Right => {
                    if self.r_mask == 0 {
                        self.phase = Phase::Done;
                        continue;
                    }
                    let bit = self.r_mask.trailing_zeros();
                    self.r_mask &= self.r_mask - 1;
                    let v = self.node_for(self.hi, bit, false);
                    self.open(v);
                }
            }
        }
    }
}

impl FusedIterator for ThreeSidedIter<'_> {}

/// Three-sided sorted reporting over arbitrary points, in both
/// orientations. Queries are in rank space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeSidedIndex {
    upper: ThreeSided,
    lower: ThreeSided,
    map: RankSpaceMap,
}

impl ThreeSidedIndex {
    pub fn build(points: &[Point]) -> Result<Self> {
        let (reduced, map) = rank_space_reduce(points)?;
        let n = reduced.len();
        Ok(ThreeSidedIndex {
            upper: ThreeSided::build(&reduced, YLimit::Upper, n)?,
            lower: ThreeSided::build(&reduced, YLimit::Lower, n)?,
            map,
        })
    }

    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    pub fn map(&self) -> &RankSpaceMap {
        &self.map
    }

    pub fn side(&self, limit: YLimit) -> &ThreeSided {
        match limit {
            YLimit::Upper => &self.upper,
            YLimit::Lower => &self.lower,
        }
    }

    /// `[a, b] x [1, c]` (upper) or `[a, b] x [c, n]` (lower), rank space.
    pub fn three_sided_iter(&self, a: i64, b: i64, c: i64, limit: YLimit) -> ThreeSidedIter<'_> {
        self.side(limit).query(a, b, c)
    }

    /// Sorted stream for a rank-space rectangle with at least one open y
    /// side. Fully bounded rectangles are rejected.
    pub fn sorted_iter(&self, q: &QueryRect) -> Result<ThreeSidedIter<'_>> {
        let a = q.x_lo.unwrap_or(i64::MIN);
        let b = q.x_hi.unwrap_or(i64::MAX);
        match (q.y_lo, q.y_hi) {
            (None, hi) => Ok(self.three_sided_iter(a, b, hi.unwrap_or(i64::MAX), YLimit::Upper)),
            (Some(lo), None) => Ok(self.three_sided_iter(a, b, lo, YLimit::Lower)),
            (Some(_), Some(_)) => {
                Err(Error::InvalidQuery("three-sided queries need one open y side".into()))
            }
        }
    }

    /// All points in rank space, by x.
    pub fn rank_points(&self) -> Vec<Point> {
        self.upper.nodes[self.upper.depth as usize].iter().map(OneSidedIndex::lowest).collect()
    }

    pub fn size_in_bytes(&self) -> usize {
        self.upper.size_in_bytes() + self.lower.size_in_bytes() + 16 * self.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::points_from_pairs;
    use crate::oracle::oracle_report_sorted;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ys: Vec<i64> = (1..=n as i64).collect();
        ys.shuffle(&mut rng);
        let mut xs: Vec<i64> = (1..=n as i64).collect();
        xs.shuffle(&mut rng);
        xs.iter().zip(&ys).enumerate().map(|(id, (&x, &y))| Point::new(x, y, id)).collect()
    }

    fn rect(a: i64, b: i64, c: i64, limit: YLimit) -> QueryRect {
        match limit {
            YLimit::Upper => QueryRect { x_lo: Some(a), x_hi: Some(b), y_lo: None, y_hi: Some(c) },
            YLimit::Lower => QueryRect { x_lo: Some(a), x_hi: Some(b), y_lo: Some(c), y_hi: None },
        }
    }

    #[test]
    fn single_leaf() {
        let pts = random_points(20, 1);
        let idx = ThreeSidedIndex::build(&pts).unwrap();
        for p in &pts {
            let got: Vec<Point> = idx.three_sided_iter(p.x, p.x, p.y, YLimit::Upper).collect();
            assert_eq!(got, vec![*p]);
            assert!(idx.three_sided_iter(p.x, p.x, p.y - 1, YLimit::Upper).next().is_none());
            assert_eq!(idx.three_sided_iter(p.x, p.x, p.y, YLimit::Lower).count(), 1);
        }
    }

    #[test]
    fn c_above_all_is_slab() {
        let pts = random_points(100, 2);
        let idx = ThreeSidedIndex::build(&pts).unwrap();
        let got: Vec<i64> = idx.three_sided_iter(10, 60, 1000, YLimit::Upper).map(|p| p.x).collect();
        assert_eq!(got, (10..=60).collect::<Vec<_>>());
    }

    #[test]
    fn random_queries_both_orientations() {
        for n in [2, 3, 7, 64, 100, 512] {
            let pts = random_points(n, n as u64);
            let idx = ThreeSidedIndex::build(&pts).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..1000 {
                let a = rng.gen_range(-1..=n as i64 + 1);
                let b = rng.gen_range(a - 1..=n as i64 + 2);
                let c = rng.gen_range(-1..=n as i64 + 2);
                let k = rng.gen_range(0..40);
                for limit in [YLimit::Upper, YLimit::Lower] {
                    let expect = oracle_report_sorted(&pts, &rect(a, b, c, limit), None);
                    let got: Vec<Point> = idx.three_sided_iter(a, b, c, limit).collect();
                    assert_eq!(got, expect, "n {n} [{a},{b}] c {c} {limit:?}");
                    let mut it = idx.three_sided_iter(a, b, c, limit);
                    let prefix: Vec<Point> = it.by_ref().take(k).collect();
                    assert_eq!(prefix, expect[..k.min(expect.len())]);
                    assert!(it.unexhausted_nodes() <= 1);
                    assert!(it.visits().iter().all(|v| v.emitted > 0 || v.in_range == 0));
                }
            }
        }
    }

    #[test]
    fn open_side_rectangles() {
        let pts = random_points(40, 9);
        let idx = ThreeSidedIndex::build(&pts).unwrap();
        let q = QueryRect { x_lo: Some(5), x_hi: None, y_lo: Some(20), y_hi: None };
        let got: Vec<Point> = idx.sorted_iter(&q).unwrap().collect();
        assert_eq!(got, oracle_report_sorted(&pts, &q, None));
        assert!(idx.sorted_iter(&QueryRect::closed(1, 2, 3, 4)).is_err());
    }

    #[test]
    fn works_on_sparse_coordinates() {
        let pts = points_from_pairs(&[(10, 400), (30, 100), (20, 300), (50, 200)]);
        let t = ThreeSided::build(&pts, YLimit::Upper, 4).unwrap();
        let got: Vec<i64> = t.query(15, 50, 300).map(|p| p.x).collect();
        assert_eq!(got, vec![20, 30, 50]);
        let t = ThreeSided::build(&pts, YLimit::Lower, 4).unwrap();
        let got: Vec<i64> = t.query(0, 100, 250).map(|p| p.x).collect();
        assert_eq!(got, vec![10, 20]);
    }
}
