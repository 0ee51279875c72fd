mod common;

use common::*;
use proptest::prelude::*;
use sorted_range::oracle::{oracle_report_sorted, oracle_successor};
use sorted_range::three_sided::OneSidedParams;
use sorted_range::{
    rank_space_reduce, OneSidedIndex, Optimal2DIndex, OptimalConfig, Point, QueryRect,
    SuccessorIndex,
};

fn point_set(max_n: usize, side: i64) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0..side, 0..side), 1..=max_n).prop_map(|pairs| {
        pairs.into_iter().enumerate().map(|(id, (x, y))| Point::new(x, y, id)).collect()
    })
}

fn rect(side: i64) -> impl Strategy<Value = QueryRect> {
    (-1..=side, -1..=side, -1..=side, -1..=side).prop_map(|(a, b, c, d)| {
        QueryRect::closed(a.min(b), a.max(b), c.min(d), c.max(d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_space_keeps_membership(pts in point_set(40, 20), q in rect(20)) {
        let (reduced, map) = rank_space_reduce(&pts).unwrap();
        let rq = map.reduce_query(&q);
        for (p, r) in pts.iter().zip(&reduced) {
            prop_assert_eq!(q.contains(p), rq.contains(r));
            prop_assert_eq!(map.to_original(*r), *p);
        }
    }

    #[test]
    fn point_structures_match_oracles(
        pts in point_set(80, 40),
        q in rect(40),
        k in prop::option::of(0usize..20),
        stride in 1u32..5,
    ) {
        let fx = Fixture::new(pts, stride, Some(3));
        prop_assert_eq!(fx.check(&q, k), Ok(()));
    }

    #[test]
    fn successor_matches_oracle(pts in point_set(200, 100), a in -2i64..102, c in -2i64..102, d in -2i64..102) {
        let idx = SuccessorIndex::build(&pts, 2).unwrap();
        let q = QueryRect::successor(a, c, d);
        let rq = idx.map().reduce_query(&q);
        let got = idx
            .range_successor(rq.x_lo.unwrap(), rq.y_lo.unwrap(), rq.y_hi.unwrap())
            .map(|p| idx.map().to_original(p));
        prop_assert_eq!(got, oracle_successor(&pts, &q));
    }

    #[test]
    fn one_sided_routes_agree(seed in 0u64..1000, n in 1usize..300, c in 0i64..310) {
        let pts = permutation_points(n, seed);
        let idx = OneSidedIndex::build(&pts).unwrap();
        let list_len = idx.params().list_len;
        let fast: Vec<Point> = idx.iter(c).take(list_len).collect();
        let merged: Vec<Point> = idx.merge_iter(c).take(list_len).collect();
        prop_assert_eq!(&fast, &merged);
        let all: Vec<Point> = idx.iter(c).collect();
        let q = QueryRect { x_lo: None, x_hi: None, y_lo: None, y_hi: Some(c) };
        prop_assert_eq!(all, oracle_report_sorted(&pts, &q, None));
    }

    #[test]
    fn one_sided_lists_are_short_and_low(seed in 0u64..1000, n in 1usize..200) {
        let pts = permutation_points(n, seed);
        let params = OneSidedParams::for_n(n);
        let idx = OneSidedIndex::with_params(&pts, params).unwrap();
        for (rank, p) in idx.points_by_y().iter().enumerate() {
            let v: Vec<Point> = idx.leftmost_list(rank).collect();
            prop_assert_eq!(v.len(), params.list_len.min(rank + 1));
            prop_assert!(v.iter().all(|q| q.y <= p.y));
            prop_assert!(v.windows(2).all(|w| w[0].x < w[1].x));
        }
    }
}

/// Every rank-space rectangle over small sets, for several group sizes.
#[test]
fn optimal_exhaustive_small_sets() {
    for (n, seed) in [(1usize, 1u64), (2, 2), (5, 3), (16, 4), (24, 5)] {
        let pts = permutation_points(n, seed);
        for g in [2usize, 3, 7] {
            let cfg = OptimalConfig { group_size: Some(g), stride: 1 };
            let idx = Optimal2DIndex::with_config(&pts, cfg).unwrap();
            for q in all_rects(0, n as i64 + 1) {
                let got: Vec<Point> = idx.sorted_iter(&q).collect();
                assert_eq!(got, oracle_report_sorted(&pts, &q, None), "n {n} g {g} {q}");
            }
        }
    }
}

#[test]
fn optimal_random_rectangles_at_64() {
    let pts = permutation_points(64, 9);
    let mut r = rng(9);
    for g in [2usize, 4, 9, 64] {
        let cfg = OptimalConfig { group_size: Some(g), stride: 1 };
        let idx = Optimal2DIndex::with_config(&pts, cfg).unwrap();
        for _ in 0..5000 {
            let q = random_rect(&mut r, 64);
            let got: Vec<Point> = idx.sorted_iter(&q).collect();
            assert_eq!(got, oracle_report_sorted(&pts, &q, None), "g {g} {q}");
        }
    }
}

#[test]
fn repeated_coordinates() {
    let pts: Vec<Point> = (0..50).map(|i| Point::new(i % 3, i % 5, i as usize)).collect();
    let fx = Fixture::new(pts, 2, Some(4));
    for q in all_rects(-1, 5) {
        fx.check(&q, None).unwrap();
    }
}
