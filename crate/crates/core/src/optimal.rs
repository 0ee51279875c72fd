//! Four-sided sorted reporting over a y-range tree with grouped nodes.
//!
//! The tree partitions points by y; every node keeps `S(v)` in x order. Each
//! `S(v)` is cut into x-consecutive groups of `g` points. A group stores its
//! local x-ranks in y order and a small three-sided index over local
//! `(x-rank, y-rank)` pairs. A node also keeps the largest x of each group in
//! a predecessor set, and a three-sided index over a sample of the
//! `ceil(log log n)` extreme-y points of every group.
//!
//! A query `[a, b] x [c, d]` splits at the y-LCA of `c` and `d` into
//! `[a, b] x [c, +inf)` on the left child and `[a, b] x (-inf, d]` on the
//! right child, whose sorted streams are merged by x. Inside a node the two
//! boundary groups are queried directly. The groups between them are read
//! through the sample index: a group that yields fewer samples than the
//! sample size has no other points in range, and a group that fills its
//! sample quota is enumerated through its own three-sided index instead.

use std::iter::{FusedIterator, Peekable};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{rank_space_reduce, Point, QueryRect, RankSpaceMap};
use crate::probe;
use crate::range_tree::{CompactRangeTree, NodeRef};
use crate::succinct::PredecessorSet;
use crate::three_sided::{ceil_log2, ceil_loglog, ThreeSided, ThreeSidedIter, YLimit};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Group {
    /// Local x-ranks ordered by y.
    by_y: Vec<u32>,
    /// Three-sided index over `(local x-rank, local y-rank)`.
    local: ThreeSided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupedNode {
    limit: YLimit,
    groups: Vec<Group>,
    /// Largest x of each group.
    ends: PredecessorSet,
    /// Sampled extreme-y points; `id` is the group index.
    samples: ThreeSided,
}

impl GroupedNode {
    pub fn limit(&self) -> YLimit {
        self.limit
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn group_len(&self, i: usize) -> usize {
        self.groups[i].by_y.len()
    }

    /// Sampled points with their group index in `id`, ascending x.
    pub fn samples(&self) -> Vec<Point> {
        self.samples.query(i64::MIN, i64::MAX, match self.limit {
            YLimit::Upper => i64::MAX,
            YLimit::Lower => i64::MIN,
        })
        .collect()
    }
}

/// Build options.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalConfig {
    /// Points per group; `None` picks `min(ceil(log n)^3, max(2, n))`.
    pub group_size: Option<usize>,
    /// Materialization stride of the y-range tree.
    pub stride: u32,
}

impl Default for OptimalConfig {
    fn default() -> Self {
        OptimalConfig { group_size: None, stride: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Optimal2DIndex {
    /// Range tree on `(y, x)`: leaves by y, node sequences by x.
    tree: CompactRangeTree,
    /// `nodes[level][offset]` for levels `1..=depth`; level 0 is empty.
    nodes: Vec<Vec<GroupedNode>>,
    group_size: usize,
    sample_len: usize,
    map: RankSpaceMap,
}

/// One group read in full through its local index while answering from the
/// sample stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Escalation {
    pub node: NodeRef,
    pub group: usize,
    /// Samples of the group the sample stream had produced.
    pub samples_seen: usize,
}

fn swap(p: Point) -> Point {
    Point::new(p.y, p.x, p.id)
}

impl Optimal2DIndex {
    pub fn build(points: &[Point]) -> Result<Self> {
        Self::with_config(points, OptimalConfig::default())
    }

    pub fn with_config(points: &[Point], cfg: OptimalConfig) -> Result<Self> {
        if matches!(cfg.group_size, Some(g) if g < 2) {
            return Err(Error::Config("group size must be at least 2".into()));
        }
        let (reduced, map) = rank_space_reduce(points)?;
        let n = reduced.len();
        let swapped: Vec<Point> = reduced.iter().copied().map(swap).collect();
        let tree = CompactRangeTree::build(&swapped, cfg.stride)?;
        let group_size = cfg.group_size.unwrap_or_else(|| ceil_log2(n).pow(3).min(n.max(2)));
        let sample_len = ceil_loglog(n);

        let mut nodes = vec![Vec::new()];
        for level in 1..=tree.depth() {
            let mut row = Vec::new();
            for offset in 0..1usize << level {
                let v = NodeRef::new(level, offset);
                if tree.node_len(v) == 0 {
                    break;
                }
                let s: Vec<Point> = tree.materialize(v).into_iter().map(swap).collect();
                let limit = if v.is_left_child() { YLimit::Lower } else { YLimit::Upper };
                row.push(Self::group_node(&s, limit, group_size, sample_len, n)?);
            }
            nodes.push(row);
        }
        Ok(Optimal2DIndex { tree, nodes, group_size, sample_len, map })
    }

    fn group_node(
        s: &[Point],
        limit: YLimit,
        g: usize,
        sample_len: usize,
        n: usize,
    ) -> Result<GroupedNode> {
        let mut groups = Vec::with_capacity(s.len().div_ceil(g));
        let mut samples = Vec::new();
        for (gi, chunk) in s.chunks(g).enumerate() {
            let mut by_y: Vec<u32> = (0..chunk.len() as u32).collect();
            by_y.sort_by_key(|&r| chunk[r as usize].y);
            let mut y_rank = vec![0i64; chunk.len()];
            for (t, &r) in by_y.iter().enumerate() {
                y_rank[r as usize] = t as i64;
            }
            let pairs: Vec<Point> =
                (0..chunk.len()).map(|r| Point::new(r as i64, y_rank[r], r)).collect();
            let local = ThreeSided::build(&pairs, limit, n)?;
            let take = sample_len.min(chunk.len());
            let picked = match limit {
                YLimit::Upper => &by_y[..take],
                YLimit::Lower => &by_y[by_y.len() - take..],
            };
            samples.extend(picked.iter().map(|&r| Point { id: gi, ..chunk[r as usize] }));
            groups.push(Group { by_y, local });
        }
        let ends = PredecessorSet::new(s.chunks(g).map(|c| c[c.len() - 1].x as u32));
        let samples = ThreeSided::build(&samples, limit, n)?;
        Ok(GroupedNode { limit, groups, ends, samples })
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn map(&self) -> &RankSpaceMap {
        &self.map
    }

    pub fn tree(&self) -> &CompactRangeTree {
        &self.tree
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    /// Samples kept per group, `ceil(log log n)`.
    pub fn sample_len(&self) -> usize {
        self.sample_len
    }

    pub fn node(&self, v: NodeRef) -> Option<&GroupedNode> {
        self.nodes.get(v.level as usize)?.get(v.offset)
    }

    /// `S(v)[i]` in rank space.
    fn at(&self, v: NodeRef, i: usize) -> Point {
        swap(self.tree.point_unchecked(v, i))
    }

    /// y of `S(v)[i]`, without building the point.
    fn y_at(&self, v: NodeRef, i: usize) -> i64 {
        self.tree.decode_x(v, i) as i64 + 1
    }

    /// The point with local x-rank `r` in group `group` of `v`.
    pub fn rank_to_point(&self, v: NodeRef, group: usize, r: usize) -> Result<Point> {
        let gn = self.node(v).ok_or(Error::IllegalMove("node has no groups"))?;
        let len = gn.groups.get(group).map_or(0, |g| g.by_y.len());
        if r >= len {
            return Err(Error::OutOfRange { index: r, len });
        }
        Ok(self.at(v, group * self.group_size + r))
    }

    /// All points in rank space, by x.
    pub fn rank_points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = (0..self.len()).map(|y| swap(self.tree.point_at_x(y))).collect();
        pts.sort_by_key(|p| p.x);
        pts
    }

    /// Points of `S(v)` in `[a, b]` with `y <= bound` (upper) or
    /// `y >= bound` (lower), by the node's own orientation.
    pub fn node_three_sided(&self, v: NodeRef, a: i64, b: i64, bound: i64) -> NodeIter<'_> {
        let mut it = NodeIter::empty(self, v, bound);
        let Some(gn) = self.node(v) else { return it };
        it.limit = gn.limit;
        let Some(i) = gn.ends.succ_index(a) else { return it };
        let j = match gn.ends.succ_index(b) {
            None => gn.groups.len() - 1,
            Some(j) if self.at(v, j * self.group_size).x > b => match j.checked_sub(1) {
                Some(j) => j,
                None => return it,
            },
            Some(j) => j,
        };
        if i > j {
            return it;
        }
        let ra = self.first_rank_at_least(v, i, a);
        let rb = self.last_rank_at_most(v, j, b);
        if i == j {
            if ra <= rb {
                it.first = self.group_query(v, i, ra, rb, bound);
            }
            return it;
        }
        it.first = self.group_query(v, i, ra, gn.groups[i].by_y.len() - 1, bound);
        if j > i + 1 {
            let lo = self.at(v, (i + 1) * self.group_size).x;
            let hi = self.at(v, j * self.group_size - 1).x;
            it.middle = Some(gn.samples.query(lo, hi, bound).peekable());
        }
        it.last_group = Some((j, rb));
        it
    }

    fn first_rank_at_least(&self, v: NodeRef, group: usize, a: i64) -> usize {
        let base = group * self.group_size;
        let len = self.nodes[v.level as usize][v.offset].groups[group].by_y.len();
        partition(len, |r| self.at(v, base + r).x < a)
    }

    /// Callers guarantee the group's first x is `<= b`.
    fn last_rank_at_most(&self, v: NodeRef, group: usize, b: i64) -> usize {
        let base = group * self.group_size;
        let len = self.nodes[v.level as usize][v.offset].groups[group].by_y.len();
        partition(len, |r| self.at(v, base + r).x <= b) - 1
    }

    /// Local ranks `[ra, rb]` of a group filtered by the y bound.
    fn group_query(&self, v: NodeRef, group: usize, ra: usize, rb: usize, bound: i64) -> Option<GroupStream<'_>> {
        probe::node_visit();
        let gn = &self.nodes[v.level as usize][v.offset];
        let g = &gn.groups[group];
        let base = group * self.group_size;
        let y_of = |t: usize| self.y_at(v, base + g.by_y[t] as usize);
        let t = match gn.limit {
            YLimit::Upper => {
                let cnt = partition(g.by_y.len(), |t| y_of(t) <= bound);
                if cnt == 0 {
                    return None;
                }
                cnt - 1
            }
            YLimit::Lower => {
                let first = partition(g.by_y.len(), |t| y_of(t) < bound);
                if first == g.by_y.len() {
                    return None;
                }
                first
            }
        };
        Some(GroupStream { base, inner: g.local.query(ra as i64, rb as i64, t as i64) })
    }

    /// Streams `q` (rank space) in ascending x.
    pub fn sorted_iter(&self, q: &QueryRect) -> Optimal2DIter<'_> {
        let mut it = Optimal2DIter { sides: Vec::new(), single: None };
        let Some(g) = q.clamp_to_grid(self.len()) else { return it };
        let (a, b, c, d) = (g.x_lo as i64, g.x_hi as i64, g.y_lo, g.y_hi);
        if c == d {
            let p = swap(self.tree.point_at_x(c - 1));
            if a <= p.x && p.x <= b {
                it.single = Some(p);
            }
            return it;
        }
        let depth = self.tree.depth();
        let l = self.tree.lca_level(c, d);
        let left = NodeRef::new(l + 1, (c - 1) >> (depth - l - 1));
        let right = NodeRef::new(l + 1, left.offset + 1);
        it.sides.push(Side::new(self.node_three_sided(left, a, b, c as i64)));
        it.sides.push(Side::new(self.node_three_sided(right, a, b, d as i64)));
        it
    }

    pub fn size_in_bytes(&self) -> usize {
        let node_bytes = |gn: &GroupedNode| {
            gn.ends.size_in_bytes()
                + gn.samples.size_in_bytes()
                + gn.groups.iter().map(|g| 4 * g.by_y.len() + g.local.size_in_bytes()).sum::<usize>()
        };
        self.tree.size_in_bytes()
            + self.nodes.iter().flatten().map(node_bytes).sum::<usize>()
            + 16 * self.len()
    }
}

/// First `i` in `0..len` where `pred` turns false (`pred` is monotone).
fn partition(len: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, len);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Clone, Debug)]
struct GroupStream<'a> {
    base: usize,
    inner: ThreeSidedIter<'a>,
}

/// Sorted stream of one node's three-sided query: the first boundary
/// group, then the middle groups through the samples, then the last
/// boundary group.
#[derive(Clone, Debug)]
pub struct NodeIter<'a> {
    idx: &'a Optimal2DIndex,
    v: NodeRef,
    bound: i64,
    limit: YLimit,
    first: Option<GroupStream<'a>>,
    middle: Option<Peekable<ThreeSidedIter<'a>>>,
    /// Samples of one middle group waiting to be emitted.
    held: Vec<Point>,
    held_pos: usize,
    escalated: Option<GroupStream<'a>>,
    last_group: Option<(usize, usize)>,
    escalations: Vec<Escalation>,
}

impl<'a> NodeIter<'a> {
    fn empty(idx: &'a Optimal2DIndex, v: NodeRef, bound: i64) -> Self {
        NodeIter {
            idx,
            v,
            bound,
            limit: YLimit::Upper,
            first: None,
            middle: None,
            held: Vec::new(),
            held_pos: 0,
            escalated: None,
            last_group: None,
            escalations: Vec::new(),
        }
    }

    /// Groups enumerated through their local index so far.
    pub fn escalations(&self) -> &[Escalation] {
        &self.escalations
    }

    pub fn limit(&self) -> YLimit {
        self.limit
    }

    fn pull(&self, s: &mut GroupStream<'a>) -> Option<Point> {
        let p = s.inner.next()?;
        Some(self.idx.at(self.v, s.base + p.id))
    }

    /// Refills `held` or `escalated` from the sample stream.
    fn advance_middle(&mut self) -> bool {
        let Some(mid) = self.middle.as_mut() else { return false };
        let Some(first) = mid.next() else {
            self.middle = None;
            return false;
        };
        let group = first.id;
        self.held.clear();
        self.held_pos = 0;
        self.held.push(first);
        while let Some(p) = mid.next_if(|p| p.id == group) {
            self.held.push(p);
        }
        let quota = self.idx.sample_len;
        let gn = &self.idx.nodes[self.v.level as usize][self.v.offset];
        let size = gn.groups[group].by_y.len();
        if self.held.len() >= quota && size > quota {
            self.escalations.push(Escalation {
                node: self.v,
                group,
                samples_seen: self.held.len(),
            });
            self.held.clear();
            self.escalated = self.idx.group_query(self.v, group, 0, size - 1, self.bound);
        }
        true
    }
}

impl Iterator for NodeIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if let Some(mut s) = self.first.take() {
            if let Some(p) = self.pull(&mut s) {
                self.first = Some(s);
                return Some(p);
            }
        }
        loop {
            if let Some(mut s) = self.escalated.take() {
                if let Some(p) = self.pull(&mut s) {
                    self.escalated = Some(s);
                    return Some(p);
                }
            }
            if self.held_pos < self.held.len() {
                let p = self.held[self.held_pos];
                self.held_pos += 1;
                return Some(self.idx.map_sample(p));
            }
            if !self.advance_middle() {
                break;
            }
        }
        if let Some((j, rb)) = self.last_group.take() {
            self.first = self.idx.group_query(self.v, j, 0, rb, self.bound);
            return self.next();
        }
        None
    }
}

impl FusedIterator for NodeIter<'_> {}

impl Optimal2DIndex {
    /// Sample points carry the group in `id`; restore the point's own id.
    fn map_sample(&self, p: Point) -> Point {
        swap(self.tree.point_at_x(p.y as usize - 1))
    }
}

/// Four-sided sorted stream: a two-way merge by x of the left-child and
/// right-child node streams.
#[derive(Clone, Debug)]
pub struct Optimal2DIter<'a> {
    sides: Vec<Side<'a>>,
    single: Option<Point>,
}

#[derive(Clone, Debug)]
struct Side<'a> {
    stream: NodeIter<'a>,
    head: Option<Point>,
}

impl<'a> Side<'a> {
    fn new(mut stream: NodeIter<'a>) -> Self {
        let head = stream.next();
        Side { stream, head }
    }
}

impl Optimal2DIter<'_> {
    /// Escalations recorded so far by both node streams.
    pub fn escalations(&self) -> Vec<Escalation> {
        self.sides.iter().flat_map(|s| s.stream.escalations().iter().copied()).collect()
    }
}

impl Iterator for Optimal2DIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if let Some(p) = self.single.take() {
            return Some(p);
        }
        let side = self
            .sides
            .iter_mut()
            .filter(|s| s.head.is_some())
            .min_by_key(|s| s.head.map(|p| p.x))?;
        let p = side.head;
        side.head = side.stream.next();
        p
    }
}

impl FusedIterator for Optimal2DIter<'_> {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_report_sorted;
    use crate::range_tree::tests::random_rank_points;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_random(idx: &Optimal2DIndex, pts: &[Point], queries: usize, seed: u64) {
        let n = pts.len() as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..queries {
            let a = rng.gen_range(0..=n + 1);
            let b = rng.gen_range(a - 1..=n + 1);
            let c = rng.gen_range(0..=n + 1);
            let d = rng.gen_range(c - 1..=n + 1);
            let q = QueryRect::closed(a, b, c, d);
            let got: Vec<Point> = idx.sorted_iter(&q).collect();
            assert_eq!(got, oracle_report_sorted(pts, &q, None), "{q}");
        }
    }

    fn check_escalations(idx: &Optimal2DIndex, it: &Optimal2DIter<'_>) {
        for e in it.escalations() {
            assert!(e.samples_seen >= idx.sample_len());
        }
    }

    #[test]
    fn tiny_inputs() {
        let one = [Point::new(5, 5, 0)];
        let idx = Optimal2DIndex::build(&one).unwrap();
        assert_eq!(idx.sorted_iter(&QueryRect::all()).collect::<Vec<_>>(), vec![Point::new(1, 1, 0)]);
        assert_eq!(idx.sorted_iter(&QueryRect::closed(2, 3, 1, 1)).count(), 0);
        let two = random_rank_points(2, 1);
        let idx = Optimal2DIndex::build(&two).unwrap();
        check_random(&idx, &two, 50, 1);
    }

    #[test]
    fn bad_group_size() {
        let pts = random_rank_points(10, 1);
        let cfg = OptimalConfig { group_size: Some(1), stride: 1 };
        assert!(matches!(Optimal2DIndex::with_config(&pts, cfg), Err(Error::Config(_))));
    }

    #[test]
    fn groups_partition_every_node() {
        let pts = random_rank_points(4096, 11);
        let idx = Optimal2DIndex::build(&pts).unwrap();
        let t = idx.tree();
        for level in 1..=t.depth() {
            for offset in 0..1usize << level {
                let v = NodeRef::new(level, offset);
                let s: Vec<Point> = t.materialize(v).into_iter().map(swap).collect();
                if s.is_empty() {
                    assert!(idx.node(v).is_none());
                    continue;
                }
                let gn = idx.node(v).unwrap();
                let sizes: Vec<usize> = (0..gn.group_count()).map(|i| gn.group_len(i)).collect();
                assert_eq!(sizes.iter().sum::<usize>(), s.len());
                assert!(sizes[..sizes.len() - 1].iter().all(|&g| g == idx.group_size()));
                let samples = gn.samples();
                for (i, chunk) in s.chunks(idx.group_size()).enumerate() {
                    let mut ys: Vec<i64> = chunk.iter().map(|p| p.y).collect();
                    ys.sort_unstable();
                    let k = idx.sample_len().min(chunk.len());
                    let expect: Vec<i64> = match gn.limit() {
                        YLimit::Upper => ys[..k].to_vec(),
                        YLimit::Lower => ys[ys.len() - k..].to_vec(),
                    };
                    let mut got: Vec<i64> =
                        samples.iter().filter(|p| p.id == i).map(|p| p.y).collect();
                    got.sort_unstable();
                    assert_eq!(got, expect);
                }
            }
        }
    }

    #[test]
    fn rank_to_point_decodes() {
        let pts = random_rank_points(1024, 3);
        let idx = Optimal2DIndex::build(&pts).unwrap();
        let t = idx.tree();
        for v in [NodeRef::new(1, 0), NodeRef::new(1, 1), NodeRef::new(4, 5)] {
            let s: Vec<Point> = t.materialize(v).into_iter().map(swap).collect();
            let g = idx.group_size();
            for (pos, p) in s.iter().enumerate() {
                assert_eq!(idx.rank_to_point(v, pos / g, pos % g).unwrap(), *p);
            }
            let last = idx.node(v).unwrap().group_count() - 1;
            assert_eq!(idx.rank_to_point(v, 0, 0).unwrap().x, s[0].x);
            assert!(idx.rank_to_point(v, last, g).is_err());
        }
    }

    #[test]
    fn random_queries_default_groups() {
        let pts = random_rank_points(4096, 5);
        let idx = Optimal2DIndex::build(&pts).unwrap();
        check_random(&idx, &pts, 300, 9);
    }

    #[test]
    fn small_groups_exercise_spanning_path() {
        for g in [2, 3, 5, 8] {
            let pts = random_rank_points(300, g as u64);
            let cfg = OptimalConfig { group_size: Some(g), stride: 2 };
            let idx = Optimal2DIndex::with_config(&pts, cfg).unwrap();
            check_random(&idx, &pts, 500, 4);
        }
    }

    #[test]
    fn clustered_low_points_escalate() {
        // x-consecutive runs of low y make whole groups fall below d.
        let n = 512i64;
        let pts: Vec<Point> = (1..=n)
            .map(|x| {
                let y = if (x / 16) % 2 == 0 { x / 2 + 1 } else { n - x / 2 };
                (x, y)
            })
            .scan(std::collections::HashSet::new(), |seen, (x, mut y)| {
                while !seen.insert(y) {
                    y = y % n + 1;
                }
                Some((x, y))
            })
            .enumerate()
            .map(|(id, (x, y))| Point::new(x, y, id))
            .collect();
        let cfg = OptimalConfig { group_size: Some(16), stride: 1 };
        let idx = Optimal2DIndex::with_config(&pts, cfg).unwrap();
        let mut total = 0;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let a = rng.gen_range(1..n / 4);
            let b = rng.gen_range(3 * n / 4..=n);
            let c = rng.gen_range(1..n / 4);
            let d = rng.gen_range(3 * n / 4..=n);
            let q = QueryRect::closed(a, b, c, d);
            let mut it = idx.sorted_iter(&q);
            let got: Vec<Point> = it.by_ref().collect();
            assert_eq!(got, oracle_report_sorted(&pts, &q, None));
            check_escalations(&idx, &it);
            total += it.escalations().len();
        }
        assert!(total > 0);
    }

    #[test]
    fn whole_grid_and_adjacent_rows() {
        let pts = random_rank_points(200, 8);
        let idx = Optimal2DIndex::build(&pts).unwrap();
        let all: Vec<i64> = idx.sorted_iter(&QueryRect::all()).map(|p| p.x).collect();
        assert_eq!(all, (1..=200).collect::<Vec<_>>());
        for y in 1..200 {
            let q = QueryRect { x_lo: None, x_hi: None, y_lo: Some(y), y_hi: Some(y + 1) };
            assert_eq!(idx.sorted_iter(&q).count(), 2);
        }
    }
}
