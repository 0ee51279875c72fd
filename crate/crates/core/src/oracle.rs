//! Brute-force reference answers. Every index in the crate is checked
//! against these, and the CLI uses them for `--verify`.

use crate::model::{Point, QueryRect};

/// Points of `q` ascending by x (ties by id), truncated to `k`.
pub fn oracle_report_sorted(points: &[Point], q: &QueryRect, k: Option<usize>) -> Vec<Point> {
    let mut hits: Vec<Point> = points.iter().copied().filter(|p| q.contains(p)).collect();
    hits.sort_by_key(|p| (p.x, p.id));
    if let Some(k) = k {
        hits.truncate(k);
    }
    hits
}

/// Minimum-x point of `q`. Intended for `q` with an unbounded right side.
pub fn oracle_successor(points: &[Point], q: &QueryRect) -> Option<Point> {
    points
        .iter()
        .copied()
        .filter(|p| q.contains(p))
        .min_by_key(|p| (p.x, p.id))
}
/// Maximum-x point of `q` (ties: largest id, the last in `(x, id)` order).
/// Maximum-x point of `q`.
pub fn oracle_predecessor(points: &[Point], q: &QueryRect) -> Option<Point> {
    points
        .iter()
        .copied()
        .filter(|p| q.contains(p))
        .max_by_key(|p| (p.x, p.id))
}

/// Points of `q` not dominated by another point of `q`, descending by x.
pub fn oracle_maximal(points: &[Point], q: &QueryRect) -> Vec<Point> {
    let inside: Vec<Point> = points.iter().copied().filter(|p| q.contains(p)).collect();
    let mut out: Vec<Point> = inside
        .iter()
        .copied()
        .filter(|p| !inside.iter().any(|r| r.id != p.id && r.dominates(p)))
        .collect();
    out.sort_by_key(|p| (std::cmp::Reverse(p.x), p.y, p.id));
    out
}

/// Points below-left of `(qx, qy)` whose closed rectangle spanned with the
/// query location holds no other point. Descending by x.
pub fn oracle_visible(points: &[Point], qx: i64, qy: i64) -> Vec<Point> {
    let mut out: Vec<Point> = points
        .iter()
        .copied()
        .filter(|p| p.x <= qx && p.y <= qy)
        .filter(|p| {
            !points.iter().any(|r| {
                r.id != p.id && r.x >= p.x && r.x <= qx && r.y >= p.y && r.y <= qy
            })
        })
        .collect();
    out.sort_by_key(|p| (std::cmp::Reverse(p.x), p.y, p.id));
    out
}

/// 1-based suffix array by sorting all suffixes directly.
pub fn naive_suffix_array(text: &[u8]) -> Vec<usize> {
    let mut sa: Vec<usize> = (0..text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    sa.into_iter().map(|i| i + 1).collect()
}

/// All 1-based start positions of `pattern`, overlapping, ascending.
pub fn naive_occurrences(text: &[u8], pattern: &[u8]) -> Vec<usize> {
    if pattern.is_empty() {
        return (1..=text.len()).collect();
    }
    if pattern.len() > text.len() {
        return Vec::new();
    }
    text.windows(pattern.len())
        .enumerate()
        .filter(|(_, w)| *w == pattern)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Leftmost occurrence at a position `>= j`.
pub fn naive_successive(text: &[u8], pattern: &[u8], j: usize) -> Option<usize> {
    naive_occurrences(text, pattern).into_iter().find(|&i| i >= j)
}

/// Greedy leftmost chain of non-overlapping occurrences.
pub fn naive_non_overlapping(text: &[u8], pattern: &[u8]) -> Vec<usize> {
    if pattern.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut next = 1;
    for i in naive_occurrences(text, pattern) {
        if i >= next {
            out.push(i);
            next = i + pattern.len();
        }
    }
    out
}

/// Leftmost embedding of `parts[0] * parts[1] * ...`, where `*` matches any
/// (possibly empty) string.
pub fn naive_dont_care(text: &[u8], parts: &[&[u8]]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(parts.len());
    let mut from = 1;
    for part in parts {
        let j = naive_successive(text, part, from)?;
        out.push(j);
        from = j + part.len();
    }
    Some(out)
}
