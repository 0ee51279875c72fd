//! Points, query rectangles and the reduction to rank space.
//!
//! Every index in this crate works on an `n x n` grid where the x and y
//! coordinates are each a permutation of `1..=n`. [`rank_space_reduce`] maps
//! arbitrary integer points onto that grid (ties broken by point id) and
//! returns a [`RankSpaceMap`] which translates query rectangles and maps
//! reported points back to their original coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A two-dimensional grid point. `id` is the 0-based insertion index and
/// survives every coordinate transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
    pub id: usize,
}

impl Point {
    pub const fn new(x: i64, y: i64, id: usize) -> Self {
        Point { x, y, id }
    }

    /// `self` dominates `other` when both coordinates are at least as large.
    pub fn dominates(&self, other: &Point) -> bool {
        self.x >= other.x && self.y >= other.y
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})#{}", self.x, self.y, self.id)
    }
}

/// Builds points from plain `(x, y)` pairs, numbering them in order.
pub fn points_from_pairs(pairs: &[(i64, i64)]) -> Vec<Point> {
    pairs
        .iter()
        .enumerate()
        .map(|(id, &(x, y))| Point::new(x, y, id))
        .collect()
}

/// Axis-aligned query rectangle. `None` on a side means that side is
/// unbounded. A rectangle with `lo > hi` on some axis is empty; such
/// rectangles come out of [`RankSpaceMap::reduce_query`] and are legal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct QueryRect {
    pub x_lo: Option<i64>,
    pub x_hi: Option<i64>,
    pub y_lo: Option<i64>,
    pub y_hi: Option<i64>,
}

impl QueryRect {
    /// Validated constructor: bounded sides must satisfy `lo <= hi`.
    pub fn new(
        x_lo: Option<i64>,
        x_hi: Option<i64>,
        y_lo: Option<i64>,
        y_hi: Option<i64>,
    ) -> Result<Self> {
        if let (Some(a), Some(b)) = (x_lo, x_hi) {
            if a > b {
                return Err(Error::InvalidQuery(format!("x_lo {a} > x_hi {b}")));
            }
        }
        if let (Some(c), Some(d)) = (y_lo, y_hi) {
            if c > d {
                return Err(Error::InvalidQuery(format!("y_lo {c} > y_hi {d}")));
            }
        }
        Ok(QueryRect { x_lo, x_hi, y_lo, y_hi })
    }

    /// The closed rectangle `[x_lo, x_hi] x [y_lo, y_hi]` (unchecked).
    pub const fn closed(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Self {
        QueryRect { x_lo: Some(x_lo), x_hi: Some(x_hi), y_lo: Some(y_lo), y_hi: Some(y_hi) }
    }

    /// The whole plane.
    pub const fn all() -> Self {
        QueryRect { x_lo: None, x_hi: None, y_lo: None, y_hi: None }
    }

    /// `[a, +inf) x [c, d]`, the shape of a range successor query.
    pub const fn successor(a: i64, c: i64, d: i64) -> Self {
        QueryRect { x_lo: Some(a), x_hi: None, y_lo: Some(c), y_hi: Some(d) }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.x_lo.is_none_or(|a| p.x >= a)
            && self.x_hi.is_none_or(|b| p.x <= b)
            && self.y_lo.is_none_or(|c| p.y >= c)
            && self.y_hi.is_none_or(|d| p.y <= d)
    }

    /// True when no integer point can lie inside.
    pub fn is_empty(&self) -> bool {
        matches!((self.x_lo, self.x_hi), (Some(a), Some(b)) if a > b)
            || matches!((self.y_lo, self.y_hi), (Some(c), Some(d)) if c > d)
    }

    /// Intersects the rectangle with the rank-space grid `[1, n]^2`.
    /// Returns `None` when the intersection is empty.
    pub fn clamp_to_grid(&self, n: usize) -> Option<GridRect> {
        let n = n as i64;
        let x_lo = self.x_lo.map_or(1, |v| v.max(1));
        let x_hi = self.x_hi.map_or(n, |v| v.min(n));
        let y_lo = self.y_lo.map_or(1, |v| v.max(1));
        let y_hi = self.y_hi.map_or(n, |v| v.min(n));
        if x_lo > x_hi || y_lo > y_hi {
            return None;
        }
        Some(GridRect {
            x_lo: x_lo as usize,
            x_hi: x_hi as usize,
            y_lo: y_lo as usize,
            y_hi: y_hi as usize,
        })
    }
}

impl fmt::Display for QueryRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: Option<i64>, inf: &str| v.map_or(inf.to_string(), |v| v.to_string());
        write!(
            f,
            "[{},{}]x[{},{}]",
            side(self.x_lo, "-inf"),
            side(self.x_hi, "+inf"),
            side(self.y_lo, "-inf"),
            side(self.y_hi, "+inf")
        )
    }
}

/// A non-empty closed rectangle inside the rank-space grid (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridRect {
    pub x_lo: usize,
    pub x_hi: usize,
    pub y_lo: usize,
    pub y_hi: usize,
}

/// Sorted original coordinates; rank `r` (1-based) maps back to
/// `x_sorted[r - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankSpaceMap {
    x_sorted: Vec<i64>,
    y_sorted: Vec<i64>,
}

impl RankSpaceMap {
    /// Map for points that already live in rank space.
    pub fn identity(n: usize) -> Self {
        let ranks: Vec<i64> = (1..=n as i64).collect();
        RankSpaceMap { x_sorted: ranks.clone(), y_sorted: ranks }
    }

    pub fn len(&self) -> usize {
        self.x_sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_sorted.is_empty()
    }

    pub fn x_sorted(&self) -> &[i64] {
        &self.x_sorted
    }

    pub fn y_sorted(&self) -> &[i64] {
        &self.y_sorted
    }

    pub fn original_x(&self, rank: i64) -> i64 {
        self.x_sorted[rank as usize - 1]
    }

    pub fn original_y(&self, rank: i64) -> i64 {
        self.y_sorted[rank as usize - 1]
    }

    /// Maps a rank-space point back to its original coordinates.
    pub fn to_original(&self, p: Point) -> Point {
        Point::new(self.original_x(p.x), self.original_y(p.y), p.id)
    }

    /// Translates a rectangle over original coordinates into rank space.
    /// A rank-space point lies in the result iff its original lies in `q`.
    pub fn reduce_query(&self, q: &QueryRect) -> QueryRect {
        QueryRect {
            x_lo: q.x_lo.map(|a| lower_rank(&self.x_sorted, a)),
            x_hi: q.x_hi.map(|b| upper_rank(&self.x_sorted, b)),
            y_lo: q.y_lo.map(|c| lower_rank(&self.y_sorted, c)),
            y_hi: q.y_hi.map(|d| upper_rank(&self.y_sorted, d)),
        }
    }

    /// Smallest x-rank whose original value is `>= v`; `n + 1` if none.
    pub fn x_rank_at_least(&self, v: i64) -> i64 {
        lower_rank(&self.x_sorted, v)
    }

    /// Largest x-rank whose original value is `<= v`; `0` if none.
    pub fn x_rank_at_most(&self, v: i64) -> i64 {
        upper_rank(&self.x_sorted, v)
    }

    pub fn y_rank_at_least(&self, v: i64) -> i64 {
        lower_rank(&self.y_sorted, v)
    }

    pub fn y_rank_at_most(&self, v: i64) -> i64 {
        upper_rank(&self.y_sorted, v)
    }
}

fn lower_rank(sorted: &[i64], v: i64) -> i64 {
    sorted.partition_point(|&s| s < v) as i64 + 1
}

fn upper_rank(sorted: &[i64], v: i64) -> i64 {
    sorted.partition_point(|&s| s <= v) as i64
}

/// Replaces coordinates by their ranks. Equal coordinates are ranked by
/// ascending id, so both output axes are permutations of `1..=n`. Output
/// points keep the input order and ids.
pub fn rank_space_reduce(points: &[Point]) -> Result<(Vec<Point>, RankSpaceMap)> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = points.len();
    let mut by_x: Vec<usize> = (0..n).collect();
    by_x.sort_by_key(|&i| (points[i].x, points[i].id));
    let mut by_y: Vec<usize> = (0..n).collect();
    by_y.sort_by_key(|&i| (points[i].y, points[i].id));

    let mut reduced = points.to_vec();
    for (rank, &i) in by_x.iter().enumerate() {
        reduced[i].x = rank as i64 + 1;
    }
    for (rank, &i) in by_y.iter().enumerate() {
        reduced[i].y = rank as i64 + 1;
    }
    let map = RankSpaceMap {
        x_sorted: by_x.iter().map(|&i| points[i].x).collect(),
        y_sorted: by_y.iter().map(|&i| points[i].y).collect(),
    };
    Ok((reduced, map))
}

/// Checks that `points` are in rank space: x and y are both permutations
/// of `1..=n`.
pub fn is_rank_space(points: &[Point]) -> bool {
    let n = points.len();
    let mut seen_x = vec![false; n];
    let mut seen_y = vec![false; n];
    for p in points {
        for (v, seen) in [(p.x, &mut seen_x), (p.y, &mut seen_y)] {
            if v < 1 || v as usize > n || seen[v as usize - 1] {
                return false;
            }
            seen[v as usize - 1] = true;
        }
    }
    true
}

/// Parses a point file: one `x,y` pair of signed 64-bit integers per line.
/// The 0-based line number becomes the point id.
pub fn parse_points(text: &str) -> Result<Vec<Point>> {
    let mut points = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let parse_err = |message: String| Error::Parse { line: line_no + 1, message };
        let (xs, ys) = line
            .split_once(',')
            .ok_or_else(|| parse_err(format!("expected `x,y`, found {line:?}")))?;
        let x = xs
            .trim()
            .parse::<i64>()
            .map_err(|e| parse_err(format!("bad x {xs:?}: {e}")))?;
        let y = ys
            .trim()
            .parse::<i64>()
            .map_err(|e| parse_err(format!("bad y {ys:?}: {e}")))?;
        points.push(Point::new(x, y, line_no));
    }
    if points.is_empty() {
        return Err(Error::Parse { line: 1, message: "no points in input".into() });
    }
    Ok(points)
}

/// Inverse of [`parse_points`].
pub fn format_points(points: &[Point]) -> String {
    let mut out = String::with_capacity(points.len() * 12);
    for p in points {
        out.push_str(&format!("{},{}\n", p.x, p.y));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_reduces_to_one_one() {
        let (r, _) = rank_space_reduce(&[Point::new(10, 10, 0)]).unwrap();
        assert_eq!(r, vec![Point::new(1, 1, 0)]);
    }

    #[test]
    fn x_tie_broken_by_id() {
        let pts = points_from_pairs(&[(5, 9), (5, 3)]);
        let (r, map) = rank_space_reduce(&pts).unwrap();
        assert_eq!(r, vec![Point::new(1, 2, 0), Point::new(2, 1, 1)]);
        assert_eq!(map.to_original(r[0]), pts[0]);
        assert_eq!(map.to_original(r[1]), pts[1]);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(rank_space_reduce(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn full_query_maps_to_full_grid() {
        let pts = points_from_pairs(&[(-4, 7), (100, 2), (3, 3)]);
        let (_, map) = rank_space_reduce(&pts).unwrap();
        let q = QueryRect::closed(-4, 100, 2, 7);
        assert_eq!(map.reduce_query(&q), QueryRect::closed(1, 3, 1, 3));
    }

    #[test]
    fn gap_query_is_empty() {
        let pts = points_from_pairs(&[(10, 1), (20, 2)]);
        let (_, map) = rank_space_reduce(&pts).unwrap();
        let q = QueryRect::closed(12, 18, 0, 5);
        let r = map.reduce_query(&q);
        assert!(r.is_empty());
        assert_eq!(r.clamp_to_grid(2), None);
    }

    #[test]
    fn unbounded_sides_stay_unbounded() {
        let pts = points_from_pairs(&[(10, 1), (20, 2)]);
        let (_, map) = rank_space_reduce(&pts).unwrap();
        let r = map.reduce_query(&QueryRect::successor(15, 0, 1));
        assert_eq!(r, QueryRect { x_lo: Some(2), x_hi: None, y_lo: Some(1), y_hi: Some(1) });
    }

    #[test]
    fn new_rejects_inverted_bounds() {
        assert!(QueryRect::new(Some(3), Some(2), None, None).is_err());
        assert!(QueryRect::new(None, None, Some(3), Some(2)).is_err());
        assert!(QueryRect::new(Some(2), Some(2), None, Some(0)).is_ok());
    }

    #[test]
    fn parse_reports_line_numbers() {
        let pts = parse_points("1,2\n-3, 4\n").unwrap();
        assert_eq!(pts, vec![Point::new(1, 2, 0), Point::new(-3, 4, 1)]);
        match parse_points("1,2\nx,3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_points(""), Err(Error::Parse { .. })));
        assert_eq!(parse_points(&format_points(&pts)).unwrap(), pts);
    }
}
