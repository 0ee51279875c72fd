//! Compact range tree.
//!
//! A balanced binary tree over the x-ranks `1..=n` (padded to a power of
//! two; padding leaves hold no points). For a node `v`, `S(v)` is the set of
//! points in its subtree sorted by y. The sets are never stored per node.
//! Instead the concatenation of all `S(v)` on a level is described by a
//! direction bitvector (bit set when the point continues into the right
//! child), and the x-ranks of a level's sequence are materialized only on
//! every `stride`-th level. `point(v, i)` follows direction bits down to the
//! next materialized level, so stride 1 decodes in O(1) with `n log n` words,
//! and larger strides trade decode steps for space.
//!
//! Positions inside a node are 0-based; index ranges are half-open.
//!
//! # Binary layout
//!
//! [`CompactRangeTree::write_to`] emits, little-endian:
//!
//! ```text
//! magic  b"SRCT"      4 bytes
//! version u16         currently 1
//! n       u64
//! stride  u32
//! depth   u32
//! for each level 0..depth:  ceil(n/64) u64 words of direction bits
//! for each level 0..depth:  u8 flag; if 1, n u32 x-ranks (0-based)
//! y_of_x  n u32       y-rank (0-based) of the point with x-rank i+1
//! id_of_x n u32       id of the point with x-rank i+1
//! ```

use std::io::{Read, Write};
use std::ops::Range;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{is_rank_space, Point};
use crate::probe;
use crate::succinct::RankBitVec;

/// Address of a tree node: depth from the root and index within the level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeRef {
    pub level: u32,
    pub offset: usize,
}

impl NodeRef {
    pub const ROOT: NodeRef = NodeRef { level: 0, offset: 0 };

    pub const fn new(level: u32, offset: usize) -> Self {
        NodeRef { level, offset }
    }

    pub fn is_left_child(&self) -> bool {
        self.level > 0 && self.offset.is_multiple_of(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Child {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Parent,
    Left,
    Right,
    Sibling,
    AncestorAtLevel(u32),
}

const MAGIC: &[u8; 4] = b"SRCT";
const VERSION: u16 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactRangeTree {
    n: usize,
    depth: u32,
    stride: u32,
    dirs: Vec<RankBitVec>,
    stored: Vec<Option<Vec<u32>>>,
    y_of_x: Vec<u32>,
    id_of_x: Vec<u32>,
}

impl CompactRangeTree {
    /// Builds the tree over rank-space points (x and y both permutations of
    /// `1..=n`).
    pub fn build(points: &[Point], stride: u32) -> Result<Self> {
        if stride < 1 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !is_rank_space(points) {
            return Err(Error::Config("points are not in rank space".into()));
        }
        if points.len() > u32::MAX as usize {
            return Err(Error::Config("too many points".into()));
        }
        let n = points.len();
        let depth = n.next_power_of_two().ilog2();
        let mut y_of_x = vec![0u32; n];
        let mut id_of_x = vec![0u32; n];
        let mut cur = vec![0u32; n];
        for p in points {
            let (x, y) = (p.x as usize - 1, p.y as usize - 1);
            y_of_x[x] = y as u32;
            id_of_x[x] = p.id as u32;
            cur[y] = x as u32;
        }

        let mut dirs = Vec::with_capacity(depth as usize);
        let mut stored = Vec::with_capacity(depth as usize);
        for level in 0..depth {
            let shift = depth - level - 1;
            dirs.push(RankBitVec::from_bits(cur.iter().map(|&e| (e >> shift) & 1 == 1)));
            stored.push((level % stride == 0).then(|| cur.clone()));

            let width = 1usize << (depth - level);
            let mut next = Vec::with_capacity(n);
            let mut start = 0;
            while start < n {
                let end = (start + width).min(n);
                let seg = &cur[start..end];
                next.extend(seg.iter().filter(|&&e| (e >> shift) & 1 == 0));
                next.extend(seg.iter().filter(|&&e| (e >> shift) & 1 == 1));
                start = end;
            }
            cur = next;
        }
        debug_assert!(cur.iter().enumerate().all(|(i, &x)| i == x as usize));

        Ok(CompactRangeTree { n, depth, stride, dirs, stored, y_of_x, id_of_x })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Level of the leaves; `ceil(log2 n)`.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn stride(&self) -> u32 {
        self.stride
    }

    pub fn root(&self) -> NodeRef {
        NodeRef::ROOT
    }

    /// Leaf holding x-rank `x` (1-based).
    pub fn leaf(&self, x: usize) -> NodeRef {
        debug_assert!(x >= 1 && x <= self.n);
        NodeRef::new(self.depth, x - 1)
    }

    /// Level of the lowest common ancestor of the leaves for x-ranks `x1`
    /// and `x2`.
    pub fn lca_level(&self, x1: usize, x2: usize) -> u32 {
        let diff = ((x1 - 1) ^ (x2 - 1)) as u64;
        self.depth - (64 - diff.leading_zeros())
    }

    fn width(&self, level: u32) -> usize {
        1usize << (self.depth - level)
    }

    /// Start of `S(v)` inside its level's concatenated sequence.
    pub fn node_start(&self, v: NodeRef) -> usize {
        (v.offset << (self.depth - v.level)).min(self.n)
    }

    /// `|S(v)|`.
    pub fn node_len(&self, v: NodeRef) -> usize {
        let w = self.width(v.level);
        let start = (v.offset * w).min(self.n);
        let end = ((v.offset + 1) * w).min(self.n);
        end - start
    }

    /// Range of x-ranks (1-based, inclusive) covered by `v`, ignoring padding.
    pub fn x_span(&self, v: NodeRef) -> (usize, usize) {
        let w = self.width(v.level);
        (v.offset * w + 1, ((v.offset + 1) * w).min(self.n))
    }

    pub fn contains_node(&self, v: NodeRef) -> bool {
        v.level <= self.depth && v.offset < (1usize << v.level)
    }

    pub fn navigate(&self, v: NodeRef, mv: Move) -> Result<NodeRef> {
        if !self.contains_node(v) {
            return Err(Error::IllegalMove("node is outside the tree"));
        }
        match mv {
            Move::Parent if v.level == 0 => Err(Error::IllegalMove("root has no parent")),
            Move::Parent => Ok(NodeRef::new(v.level - 1, v.offset / 2)),
            Move::Sibling if v.level == 0 => Err(Error::IllegalMove("root has no sibling")),
            Move::Sibling => Ok(NodeRef::new(v.level, v.offset ^ 1)),
            Move::Left | Move::Right if v.level == self.depth => {
                Err(Error::IllegalMove("leaf has no children"))
            }
            Move::Left => Ok(NodeRef::new(v.level + 1, 2 * v.offset)),
            Move::Right => Ok(NodeRef::new(v.level + 1, 2 * v.offset + 1)),
            Move::AncestorAtLevel(l) if l > v.level => {
                Err(Error::IllegalMove("ancestor level below node"))
            }
            Move::AncestorAtLevel(l) => Ok(NodeRef::new(l, v.offset >> (v.level - l))),
        }
    }

    /// x-rank (0-based) of `S(v)[i]`. Follows at most `stride - 1` direction
    /// bits before reading a materialized level.
    pub fn decode_x(&self, v: NodeRef, i: usize) -> usize {
        debug_assert!(i < self.node_len(v));
        let mut level = v.level;
        let mut offset = v.offset;
        let mut pos = self.node_start(v) + i;
        let mut hops = 0u64;
        let x = loop {
            if level == self.depth {
                break pos;
            }
            if let Some(xs) = &self.stored[level as usize] {
                break xs[pos] as usize;
            }
            let bv = &self.dirs[level as usize];
            let start = (offset << (self.depth - level)).min(self.n);
            let right = bv.get(pos);
            offset = 2 * offset + right as usize;
            level += 1;
            pos = if right {
                (offset << (self.depth - level)).min(self.n) + bv.rank1(pos) - bv.rank1(start)
            } else {
                start + bv.rank0(pos) - bv.rank0(start)
            };
            hops += 1;
        };
        probe::point_decoded(hops);
        x
    }

    /// The point `S(v)[i]`, in the tree's rank-space coordinates.
    pub fn point(&self, v: NodeRef, i: usize) -> Result<Point> {
        if !self.contains_node(v) {
            return Err(Error::IllegalMove("node is outside the tree"));
        }
        let len = self.node_len(v);
        if i >= len {
            return Err(Error::OutOfRange { index: i, len });
        }
        Ok(self.point_unchecked(v, i))
    }

    pub(crate) fn point_unchecked(&self, v: NodeRef, i: usize) -> Point {
        self.point_at_x(self.decode_x(v, i))
    }

    /// Point with 0-based x-rank `x`.
    pub fn point_at_x(&self, x: usize) -> Point {
        Point::new(x as i64 + 1, self.y_of_x[x] as i64 + 1, self.id_of_x[x] as usize)
    }

    /// Positions in `S(v)` of the points with `c <= y <= d`.
    pub fn noderange(&self, c: i64, d: i64, v: NodeRef) -> Range<usize> {
        let c = c.max(1);
        let d = d.min(self.n as i64);
        if c > d {
            return 0..0;
        }
        let mut r = (c - 1) as usize..d as usize;
        for level in 0..v.level {
            let child = if (v.offset >> (v.level - level - 1)) & 1 == 1 {
                Child::Right
            } else {
                Child::Left
            };
            let node = NodeRef::new(level, v.offset >> (v.level - level));
            r = self.translate(node, child, r);
        }
        r
    }

    /// Maps a position range in `S(v)` to the range of the same points in
    /// `S(child)`.
    pub fn range_translate(&self, v: NodeRef, child: Child, r: Range<usize>) -> Result<Range<usize>> {
        if !self.contains_node(v) || v.level == self.depth {
            return Err(Error::IllegalMove("leaf has no children"));
        }
        if r.end > self.node_len(v) || r.start > r.end {
            return Err(Error::OutOfRange { index: r.end, len: self.node_len(v) });
        }
        Ok(self.translate(v, child, r))
    }

    #[inline]
    pub(crate) fn translate(&self, v: NodeRef, child: Child, r: Range<usize>) -> Range<usize> {
        probe::rank_step();
        let bv = &self.dirs[v.level as usize];
        let s = self.node_start(v);
        match child {
            Child::Left => {
                let base = bv.rank0(s);
                bv.rank0(s + r.start) - base..bv.rank0(s + r.end) - base
            }
            Child::Right => {
                let base = bv.rank1(s);
                bv.rank1(s + r.start) - base..bv.rank1(s + r.end) - base
            }
        }
    }

    /// Decodes all of `S(v)`.
    pub fn materialize(&self, v: NodeRef) -> Vec<Point> {
        (0..self.node_len(v)).map(|i| self.point_unchecked(v, i)).collect()
    }

    pub fn size_in_bytes(&self) -> usize {
        self.dirs.iter().map(RankBitVec::size_in_bytes).sum::<usize>()
            + self.stored.iter().flatten().map(|s| 4 * s.len()).sum::<usize>()
            + 8 * self.n
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_u16::<LittleEndian>(VERSION)?;
        w.write_u64::<LittleEndian>(self.n as u64)?;
        w.write_u32::<LittleEndian>(self.stride)?;
        w.write_u32::<LittleEndian>(self.depth)?;
        for bv in &self.dirs {
            for &word in bv.words() {
                w.write_u64::<LittleEndian>(word)?;
            }
        }
        for level in &self.stored {
            match level {
                Some(xs) => {
                    w.write_u8(1)?;
                    for &x in xs {
                        w.write_u32::<LittleEndian>(x)?;
                    }
                }
                None => w.write_u8(0)?,
            }
        }
        for &y in &self.y_of_x {
            w.write_u32::<LittleEndian>(y)?;
        }
        for &id in &self.id_of_x {
            w.write_u32::<LittleEndian>(id)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("not a compact range tree".into()));
        }
        let version = r.read_u16::<LittleEndian>()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported tree version {version}")));
        }
        let n = r.read_u64::<LittleEndian>()? as usize;
        let stride = r.read_u32::<LittleEndian>()?;
        let depth = r.read_u32::<LittleEndian>()?;
        if n == 0 || stride == 0 || depth != n.next_power_of_two().ilog2() {
            return Err(Error::Format("inconsistent tree header".into()));
        }
        let read_u32s = |r: &mut R, len: usize| -> Result<Vec<u32>> {
            let mut v = vec![0u32; len];
            r.read_u32_into::<LittleEndian>(&mut v)?;
            Ok(v)
        };
        let mut dirs = Vec::with_capacity(depth as usize);
        for _ in 0..depth {
            let mut words = vec![0u64; n.div_ceil(64)];
            r.read_u64_into::<LittleEndian>(&mut words)?;
            dirs.push(RankBitVec::from_words(words, n));
        }
        let mut stored = Vec::with_capacity(depth as usize);
        for _ in 0..depth {
            stored.push(match r.read_u8()? {
                0 => None,
                1 => Some(read_u32s(r, n)?),
                f => return Err(Error::Format(format!("bad level flag {f}"))),
            });
        }
        let y_of_x = read_u32s(r, n)?;
        let id_of_x = read_u32s(r, n)?;
        Ok(CompactRangeTree { n, depth, stride, dirs, stored, y_of_x, id_of_x })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::{points_from_pairs, rank_space_reduce};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_rank_points(n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ys: Vec<i64> = (1..=n as i64).collect();
        ys.shuffle(&mut rng);
        let mut xs: Vec<i64> = (1..=n as i64).collect();
        xs.shuffle(&mut rng);
        xs.iter().zip(&ys).enumerate().map(|(id, (&x, &y))| Point::new(x, y, id)).collect()
    }

    /// `S(v)` by filtering all points under `v` and sorting by y.
    fn oracle_node(points: &[Point], t: &CompactRangeTree, v: NodeRef) -> Vec<Point> {
        let (lo, hi) = t.x_span(v);
        let mut s: Vec<Point> =
            points.iter().copied().filter(|p| p.x as usize >= lo && p.x as usize <= hi).collect();
        s.sort_by_key(|p| p.y);
        s
    }

    fn all_nodes(t: &CompactRangeTree) -> impl Iterator<Item = NodeRef> + '_ {
        (0..=t.depth()).flat_map(|l| (0..1usize << l).map(move |o| NodeRef::new(l, o)))
    }

    #[test]
    fn two_points_forced_merge() {
        let pts = points_from_pairs(&[(1, 2), (2, 1)]);
        let t = CompactRangeTree::build(&pts, 1).unwrap();
        assert_eq!(t.materialize(t.root()), vec![pts[1], pts[0]]);
    }

    #[test]
    fn single_point() {
        let pts = points_from_pairs(&[(1, 1)]);
        let t = CompactRangeTree::build(&pts, 3).unwrap();
        assert_eq!(t.depth(), 0);
        assert_eq!(t.root(), t.leaf(1));
        assert_eq!(t.point(t.root(), 0).unwrap(), pts[0]);
        assert!(t.navigate(t.root(), Move::Left).is_err());
    }

    #[test]
    fn config_and_input_errors() {
        let pts = points_from_pairs(&[(1, 1)]);
        assert!(matches!(CompactRangeTree::build(&pts, 0), Err(Error::Config(_))));
        assert!(matches!(CompactRangeTree::build(&[], 1), Err(Error::EmptyInput)));
        let bad = points_from_pairs(&[(1, 1), (1, 2)]);
        assert!(CompactRangeTree::build(&bad, 1).is_err());
    }

    #[test]
    fn every_node_matches_filter_and_sort() {
        for stride in [1, 2, 3, 8] {
            for n in [255, 256, 300] {
                let pts = random_rank_points(n, 42);
                let t = CompactRangeTree::build(&pts, stride).unwrap();
                for v in all_nodes(&t) {
                    assert_eq!(t.materialize(v), oracle_node(&pts, &t, v), "stride {stride} n {n} {v:?}");
                }
            }
        }
    }

    #[test]
    fn root_and_leaf_points() {
        let pts = random_rank_points(100, 1);
        let t = CompactRangeTree::build(&pts, 4).unwrap();
        assert_eq!(t.point(t.root(), 0).unwrap().y, 1);
        for p in &pts {
            assert_eq!(t.point(t.leaf(p.x as usize), 0).unwrap(), *p);
        }
        assert!(matches!(t.point(t.leaf(5), 1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn decode_hops_bounded_by_stride() {
        let pts = random_rank_points(512, 3);
        for stride in [1u32, 2, 4, 9] {
            let t = CompactRangeTree::build(&pts, stride).unwrap();
            for v in all_nodes(&t).step_by(7) {
                for i in 0..t.node_len(v) {
                    let (_, c) = probe::measure(|| t.point(v, i).unwrap());
                    assert_eq!(c.points_decoded, 1);
                    // hops + the one materialized read
                    assert!(c.decode_hops < stride as u64 + 1, "{c:?}");
                }
            }
        }
    }

    #[test]
    fn noderange_matches_binary_search() {
        let pts = random_rank_points(256, 42);
        let t = CompactRangeTree::build(&pts, 3).unwrap();
        assert_eq!(t.noderange(1, 256, t.root()), 0..256);
        assert_eq!(t.noderange(i64::MIN, i64::MAX, t.root()), 0..256);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let level = rng.gen_range(0..=t.depth());
            let v = NodeRef::new(level, rng.gen_range(0..1usize << level));
            let c = rng.gen_range(-3..260);
            let d = rng.gen_range(c - 5..262);
            let s = oracle_node(&pts, &t, v);
            let expect = if c > d {
                0..0
            } else {
                s.partition_point(|p| p.y < c)..s.partition_point(|p| p.y <= d)
            };
            let got = t.noderange(c, d, v);
            assert_eq!(got.len(), expect.len());
            if !expect.is_empty() {
                assert_eq!(got, expect, "{v:?} [{c},{d}]");
            }
        }
    }

    #[test]
    fn range_below_all_is_empty() {
        let pts = random_rank_points(64, 5);
        let t = CompactRangeTree::build(&pts, 2).unwrap();
        let v = NodeRef::new(3, 2);
        let min_y = t.point(v, 0).unwrap().y;
        assert!(t.noderange(1, min_y - 1, v).is_empty());
    }

    #[test]
    fn translate_full_and_empty() {
        let pts = random_rank_points(100, 8);
        let t = CompactRangeTree::build(&pts, 2).unwrap();
        let root = t.root();
        let l = t.range_translate(root, Child::Left, 0..100).unwrap();
        let r = t.range_translate(root, Child::Right, 0..100).unwrap();
        assert_eq!(l, 0..t.node_len(NodeRef::new(1, 0)));
        assert_eq!(r, 0..t.node_len(NodeRef::new(1, 1)));
        assert!(t.range_translate(root, Child::Left, 40..40).unwrap().is_empty());
        assert!(t.range_translate(root, Child::Left, 0..101).is_err());
        assert!(t.range_translate(t.leaf(3), Child::Left, 0..1).is_err());
    }

    #[test]
    fn descent_consistency() {
        let pts = random_rank_points(512, 11);
        let t = CompactRangeTree::build(&pts, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let c = rng.gen_range(1..=512);
            let d = rng.gen_range(c..=512);
            let mut v = t.root();
            let mut r = t.noderange(c, d, v);
            while v.level < t.depth() {
                let child = if rng.gen() { Child::Right } else { Child::Left };
                r = t.range_translate(v, child, r).unwrap();
                v = t.navigate(v, if child == Child::Left { Move::Left } else { Move::Right }).unwrap();
                let direct = t.noderange(c, d, v);
                assert_eq!(r, direct);
            }
        }
    }

    #[test]
    fn navigation() {
        let pts = random_rank_points(1024, 2);
        let t = CompactRangeTree::build(&pts, 2).unwrap();
        let root = t.root();
        assert_eq!(t.navigate(root, Move::AncestorAtLevel(0)).unwrap(), root);
        assert!(t.navigate(root, Move::Parent).is_err());
        let leaf = NodeRef::new(t.depth(), 5);
        assert_eq!(t.navigate(leaf, Move::Parent).unwrap(), NodeRef::new(t.depth() - 1, 2));
        assert!(t.navigate(leaf, Move::Right).is_err());
        assert_eq!(t.navigate(leaf, Move::Sibling).unwrap(), NodeRef::new(t.depth(), 4));
        assert!(t.navigate(NodeRef::new(2, 1), Move::AncestorAtLevel(3)).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let level = rng.gen_range(0..t.depth());
            let v = NodeRef::new(level, rng.gen_range(0..1usize << level));
            for mv in [Move::Left, Move::Right] {
                let c = t.navigate(v, mv).unwrap();
                assert_eq!(t.navigate(c, Move::Parent).unwrap(), v);
                assert_eq!(t.navigate(c, Move::AncestorAtLevel(level)).unwrap(), v);
            }
        }
    }

    #[test]
    fn lca_level() {
        let pts = random_rank_points(16, 0);
        let t = CompactRangeTree::build(&pts, 1).unwrap();
        assert_eq!(t.lca_level(3, 3), 4);
        assert_eq!(t.lca_level(1, 2), 3);
        assert_eq!(t.lca_level(1, 16), 0);
        assert_eq!(t.lca_level(8, 9), 0);
    }

    #[test]
    fn binary_round_trip() {
        let raw: Vec<Point> = random_rank_points(300, 4)
            .into_iter()
            .map(|p| Point::new(p.x * 7 - 1000, p.y * 3, p.id))
            .collect();
        let (pts, _) = rank_space_reduce(&raw).unwrap();
        let t = CompactRangeTree::build(&pts, 3).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let back = CompactRangeTree::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(back, t);
        buf[0] = b'X';
        assert!(matches!(CompactRangeTree::read_from(&mut buf.as_slice()), Err(Error::Format(_))));
    }
}
