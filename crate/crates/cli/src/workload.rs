//! Random indexes and query workloads for `bench` and `selftest`.

use clap::ValueEnum;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sorted_range::{IndexKind, Point, QueryRect};

use crate::query::{Engine, Query};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Succ,
    Sorted,
    #[value(name = "3sided")]
    #[serde(rename = "3sided")]
    ThreeSided,
    Maximal,
    Visible,
    Find,
    FindRmq,
    Posfind,
    Nonoverlap,
    Dontcare,
    Next,
}

impl Family {
    /// Structure a synthetic workload of this family is built on.
    pub fn default_structure(self) -> IndexKind {
        match self {
            Family::Succ | Family::Maximal | Family::Visible => IndexKind::Successor,
            Family::Sorted => IndexKind::Optimal2D,
            Family::ThreeSided => IndexKind::ThreeSided,
            _ => IndexKind::Text,
        }
    }

    pub fn for_kind(kind: IndexKind) -> &'static [Family] {
        match kind {
            IndexKind::Successor => {
                &[Family::Succ, Family::Sorted, Family::ThreeSided, Family::Maximal, Family::Visible]
            }
            IndexKind::ThreeSided => &[Family::ThreeSided],
            IndexKind::Optimal2D => &[Family::Sorted, Family::ThreeSided],
            IndexKind::Text => &[
                Family::Next,
                Family::Find,
                Family::FindRmq,
                Family::Posfind,
                Family::Nonoverlap,
                Family::Dontcare,
            ],
        }
    }
}

/// `n` points with distinct coordinates `1..=n`.
pub fn permutation_points(n: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let mut xs: Vec<i64> = (1..=n as i64).collect();
    let mut ys = xs.clone();
    xs.shuffle(rng);
    ys.shuffle(rng);
    xs.into_iter().zip(ys).enumerate().map(|(id, (x, y))| Point::new(x, y, id)).collect()
}

/// `n` points on a `side x side` grid, with repeats.
pub fn grid_points(n: usize, side: i64, rng: &mut ChaCha8Rng) -> Vec<Point> {
    (0..n).map(|id| Point::new(rng.gen_range(1..=side), rng.gen_range(1..=side), id)).collect()
}

pub fn random_text(n: usize, alphabet: &[u8], rng: &mut ChaCha8Rng) -> Vec<u8> {
    (0..n).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
}

fn interval(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> (i64, i64) {
    let a = rng.gen_range(lo - 1..=hi + 1);
    let b = rng.gen_range(a..=hi + 1);
    (a, b)
}

/// A random pattern: usually a substring of the text, sometimes arbitrary.
fn pattern(rng: &mut ChaCha8Rng, text: &[u8]) -> Vec<u8> {
    let len = rng.gen_range(1..=6.min(text.len()));
    if rng.gen_bool(0.8) {
        let s = rng.gen_range(0..=text.len() - len);
        text[s..s + len].to_vec()
    } else {
        let alphabet: Vec<u8> = {
            let mut a = text.to_vec();
            a.sort_unstable();
            a.dedup();
            a
        };
        (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
    }
}

pub fn random_query(family: Family, engine: &Engine, rng: &mut ChaCha8Rng) -> Query {
    let (x0, x1, y0, y1) = engine.extent();
    let rect = |rng: &mut ChaCha8Rng| {
        let (a, b) = interval(rng, x0, x1);
        let (c, d) = interval(rng, y0, y1);
        QueryRect::closed(a, b, c, d)
    };
    let text = engine.text().unwrap_or(&[]);
    let n = text.len();
    match family {
        Family::Succ => {
            let (c, d) = interval(rng, y0, y1);
            Query::Succ { a: rng.gen_range(x0 - 1..=x1 + 1), c: Some(c), d: Some(d) }
        }
        Family::Sorted => Query::Sorted(rect(rng)),
        Family::ThreeSided => {
            let q = rect(rng);
            Query::Sorted(if rng.gen_bool(0.5) {
                QueryRect { y_lo: None, ..q }
            } else {
                QueryRect { y_hi: None, ..q }
            })
        }
        Family::Maximal => Query::Maximal(rect(rng)),
        Family::Visible => {
            Query::Visible { x: rng.gen_range(x0 - 1..=x1 + 1), y: rng.gen_range(y0 - 1..=y1 + 1) }
        }
        Family::Next => Query::Next { j: rng.gen_range(1..=n), pattern: pattern(rng, text) },
        Family::Find | Family::FindRmq => {
            Query::Find { pattern: pattern(rng, text), rmq: family == Family::FindRmq }
        }
        Family::Posfind => {
            let i = rng.gen_range(1..=n);
            Query::PosFind { i, j: rng.gen_range(i..=n), pattern: pattern(rng, text) }
        }
        Family::Nonoverlap => Query::NonOverlap { pattern: pattern(rng, text) },
        Family::Dontcare => {
            let parts = (0..rng.gen_range(1..=3)).map(|_| pattern(rng, text)).collect();
            Query::DontCare { parts }
        }
    }
}

/// Rough index size for the memory warning: `n log^2 n` words for the
/// three-sided and grouped structures, `n log n` otherwise.
pub fn estimated_bytes(index_kind: IndexKind, n: usize) -> u128 {
    let log = (n.max(2) as f64).log2().ceil() as u128;
    let n = n as u128;
    match index_kind {
        IndexKind::ThreeSided | IndexKind::Optimal2D => 8 * n * log * log,
        _ => 8 * n * log,
    }
}
