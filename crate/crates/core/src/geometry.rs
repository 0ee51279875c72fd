//! Maximal points and rectangular visibility by walking a staircase of
//! range-predecessor queries.
//!
//! The rightmost point `p` of a rectangle is maximal. Every other maximal
//! point lies above and left of it, in `[a, p.x - 1] x [p.y + 1, d]`, so the
//! walk repeats on that rectangle until it is empty. Coordinates are in rank
//! space, where the strict `±1` shrink is exact.

use std::iter::FusedIterator;

use crate::model::{Point, QueryRect};
use crate::successor::SuccessorIndex;

/// Maximal points of a rectangle, descending by x (ascending by y).
#[derive(Clone, Debug)]
pub struct Staircase<'a> {
    idx: &'a SuccessorIndex,
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    done: bool,
}

impl Staircase<'_> {
    /// The rectangle the next step searches.
    pub fn remaining(&self) -> Option<QueryRect> {
        (!self.done).then(|| QueryRect::closed(self.a, self.b, self.c, self.d))
    }
}

impl Iterator for Staircase<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.done {
            return None;
        }
        match self.idx.range_predecessor(self.b, self.c, self.d) {
            Some(p) if p.x >= self.a => {
                self.b = p.x - 1;
                self.c = p.y + 1;
                self.done = self.b < self.a || self.c > self.d;
                Some(p)
            }
            _ => {
                self.done = true;
                None
            }
        }
    }
}

impl FusedIterator for Staircase<'_> {}

/// Maximal points of `q ∩ S` (rank space).
pub fn maximal_points<'a>(idx: &'a SuccessorIndex, q: &QueryRect) -> Staircase<'a> {
    match q.clamp_to_grid(idx.len()) {
        Some(g) => Staircase {
            idx,
            a: g.x_lo as i64,
            b: g.x_hi as i64,
            c: g.y_lo as i64,
            d: g.y_hi as i64,
            done: false,
        },
        None => Staircase { idx, a: 1, b: 0, c: 1, d: 0, done: true },
    }
}

/// Points below-left of `(qx, qy)` with no other point in the closed
/// rectangle they span with it (rank space).
pub fn rectangularly_visible(idx: &SuccessorIndex, qx: i64, qy: i64) -> Staircase<'_> {
    maximal_points(idx, &QueryRect { x_lo: None, x_hi: Some(qx), y_lo: None, y_hi: Some(qy) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::points_from_pairs;
    use crate::oracle::{oracle_maximal, oracle_visible};
    use crate::range_tree::tests::random_rank_points;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn antichain_and_chain() {
        let anti = points_from_pairs(&[(1, 3), (2, 2), (3, 1)]);
        let idx = SuccessorIndex::build(&anti, 1).unwrap();
        let got: Vec<i64> = maximal_points(&idx, &QueryRect::all()).map(|p| p.x).collect();
        assert_eq!(got, vec![3, 2, 1]);
        let chain = points_from_pairs(&[(1, 1), (2, 2)]);
        let idx = SuccessorIndex::build(&chain, 1).unwrap();
        let got: Vec<Point> = maximal_points(&idx, &QueryRect::all()).collect();
        assert_eq!(got, vec![chain[1]]);
    }

    #[test]
    fn visibility_edge_cases() {
        let one = points_from_pairs(&[(1, 1)]);
        let idx = SuccessorIndex::build(&one, 1).unwrap();
        assert_eq!(rectangularly_visible(&idx, 2, 2).collect::<Vec<_>>(), one);
        assert_eq!(rectangularly_visible(&idx, 0, 5).count(), 0);
    }

    #[test]
    fn random_rectangles() {
        let pts = random_rank_points(1024, 42);
        let idx = SuccessorIndex::build(&pts, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let a = rng.gen_range(0..=1025);
            let b = rng.gen_range(a - 1..=1025);
            let c = rng.gen_range(0..=1025);
            let d = rng.gen_range(c - 1..=1025);
            let q = QueryRect::closed(a, b, c, d);
            let got: Vec<Point> = maximal_points(&idx, &q).collect();
            assert_eq!(got, oracle_maximal(&pts, &q));
            assert!(got.windows(2).all(|w| w[1].x < w[0].x && w[1].y > w[0].y));
            let vis: Vec<Point> = rectangularly_visible(&idx, b, d).collect();
            assert_eq!(vis, oracle_visible(&pts, b, d));
        }
    }
}
