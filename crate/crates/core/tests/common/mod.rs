#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sorted_range::{
    oracle, Optimal2DIndex, OptimalConfig, Point, QueryRect, SuccessorIndex, ThreeSidedIndex,
    YLimit,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points with distinct coordinates: x and y are permutations of `1..=n`.
pub fn permutation_points(n: usize, seed: u64) -> Vec<Point> {
    let mut r = rng(seed);
    let mut xs: Vec<i64> = (1..=n as i64).collect();
    let mut ys = xs.clone();
    xs.shuffle(&mut r);
    ys.shuffle(&mut r);
    xs.into_iter().zip(ys).enumerate().map(|(id, (x, y))| Point::new(x, y, id)).collect()
}

/// `n` points on a `2n x 2n` grid; coordinates may repeat.
pub fn grid_points(n: usize, seed: u64) -> Vec<Point> {
    let mut r = rng(seed);
    let side = 2 * n as i64;
    (0..n).map(|id| Point::new(r.gen_range(1..=side), r.gen_range(1..=side), id)).collect()
}

/// Up to six points with distinct coordinates on the `6 x 6` grid.
pub fn small_grid_set(r: &mut ChaCha8Rng) -> Vec<Point> {
    let k = r.gen_range(1..=6);
    let mut xs: Vec<i64> = (1..=6).collect();
    let mut ys = xs.clone();
    xs.shuffle(r);
    ys.shuffle(r);
    (0..k).map(|i| Point::new(xs[i], ys[i], i)).collect()
}

/// Every rectangle with corners in `lo..=hi`, including degenerate ones.
pub fn all_rects(lo: i64, hi: i64) -> Vec<QueryRect> {
    let mut out = Vec::new();
    for a in lo..=hi {
        for b in a..=hi {
            for c in lo..=hi {
                for d in c..=hi {
                    out.push(QueryRect::closed(a, b, c, d));
                }
            }
        }
    }
    out
}

pub fn random_rect(r: &mut ChaCha8Rng, side: i64) -> QueryRect {
    let a = r.gen_range(0..=side + 1);
    let b = r.gen_range(a..=side + 1);
    let c = r.gen_range(0..=side + 1);
    let d = r.gen_range(c..=side + 1);
    QueryRect::closed(a, b, c, d)
}

pub fn upper(q: &QueryRect) -> QueryRect {
    QueryRect { y_lo: None, ..*q }
}

pub fn lower(q: &QueryRect) -> QueryRect {
    QueryRect { y_hi: None, ..*q }
}

/// The three point indexes over one set, queried in original coordinates.
pub struct Fixture {
    pub points: Vec<Point>,
    pub succ: SuccessorIndex,
    pub three: ThreeSidedIndex,
    pub opt: Optimal2DIndex,
}

impl Fixture {
    pub fn new(points: Vec<Point>, stride: u32, group_size: Option<usize>) -> Self {
        let succ = SuccessorIndex::build(&points, stride).unwrap();
        let three = ThreeSidedIndex::build(&points).unwrap();
        let opt = Optimal2DIndex::with_config(&points, OptimalConfig { group_size, stride: 1 })
            .unwrap();
        Fixture { points, succ, three, opt }
    }

    fn back(&self, pts: impl Iterator<Item = Point>) -> Vec<Point> {
        pts.map(|p| self.succ.map().to_original(p)).collect()
    }

    pub fn successor(&self, a: i64, c: i64, d: i64) -> Option<Point> {
        let q = self.succ.map().reduce_query(&QueryRect::successor(a, c, d));
        self.succ
            .range_successor(q.x_lo.unwrap(), q.y_lo.unwrap(), q.y_hi.unwrap())
            .map(|p| self.succ.map().to_original(p))
    }

    pub fn predecessor(&self, b: i64, c: i64, d: i64) -> Option<Point> {
        let q = QueryRect { x_lo: None, x_hi: Some(b), y_lo: Some(c), y_hi: Some(d) };
        let q = self.succ.map().reduce_query(&q);
        self.succ
            .range_predecessor(q.x_hi.unwrap(), q.y_lo.unwrap(), q.y_hi.unwrap())
            .map(|p| self.succ.map().to_original(p))
    }

    pub fn sorted(&self, q: &QueryRect, k: Option<usize>) -> Vec<Point> {
        let rq = self.succ.map().reduce_query(q);
        self.back(self.succ.sorted_iter(&rq).take(k.unwrap_or(usize::MAX)))
    }

    pub fn three_sided(&self, q: &QueryRect, limit: YLimit, k: Option<usize>) -> Vec<Point> {
        let q = match limit {
            YLimit::Upper => upper(q),
            YLimit::Lower => lower(q),
        };
        let rq = self.three.map().reduce_query(&q);
        let it = self.three.sorted_iter(&rq).unwrap();
        self.back(it.take(k.unwrap_or(usize::MAX)))
    }

    pub fn report_2d(&self, q: &QueryRect, k: Option<usize>) -> Vec<Point> {
        let rq = self.opt.map().reduce_query(q);
        self.back(self.opt.sorted_iter(&rq).take(k.unwrap_or(usize::MAX)))
    }

    pub fn maximal(&self, q: &QueryRect) -> Vec<Point> {
        let rq = self.succ.map().reduce_query(q);
        self.back(sorted_range::geometry::maximal_points(&self.succ, &rq))
    }

    pub fn visible(&self, qx: i64, qy: i64) -> Vec<Point> {
        let m = self.succ.map();
        let it = sorted_range::geometry::rectangularly_visible(
            &self.succ,
            m.x_rank_at_most(qx),
            m.y_rank_at_most(qy),
        );
        self.back(it)
    }

    /// Checks every point structure on `q` against the oracles.
    pub fn check(&self, q: &QueryRect, k: Option<usize>) -> Result<(), String> {
        let pts = &self.points;
        let (a, b, c, d) = (q.x_lo.unwrap(), q.x_hi.unwrap(), q.y_lo.unwrap(), q.y_hi.unwrap());
        let succ_q = QueryRect::successor(a, c, d);
        expect_eq("range_successor", q, self.successor(a, c, d), oracle::oracle_successor(pts, &succ_q))?;
        let pred_q = QueryRect { x_lo: None, ..*q };
        expect_eq("range_predecessor", q, self.predecessor(b, c, d), oracle::oracle_predecessor(pts, &pred_q))?;
        expect_eq("sorted_iter", q, self.sorted(q, k), oracle::oracle_report_sorted(pts, q, k))?;
        for (limit, oq) in [(YLimit::Upper, upper(q)), (YLimit::Lower, lower(q))] {
            expect_eq("three_sided_iter", &oq, self.three_sided(q, limit, k), oracle::oracle_report_sorted(pts, &oq, k))?;
        }
        expect_eq("sorted_report_2d", q, self.report_2d(q, k), oracle::oracle_report_sorted(pts, q, k))
    }

    /// Checks the staircase walks on `q` against the quadratic oracles.
    pub fn check_geometry(&self, q: &QueryRect) -> Result<(), String> {
        expect_eq("maximal_points", q, self.maximal(q), oracle::oracle_maximal(&self.points, q))?;
        let (qx, qy) = (q.x_hi.unwrap(), q.y_hi.unwrap());
        expect_eq("rectangularly_visible", q, self.visible(qx, qy), oracle::oracle_visible(&self.points, qx, qy))
    }
}

pub fn expect_eq<T: PartialEq + std::fmt::Debug>(
    what: &str,
    q: &QueryRect,
    got: T,
    want: T,
) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what} on {q}: got {got:?}, want {want:?}"))
    }
}
