//! Query language, execution against a loaded index, and oracle checks.
//!
//! One query per line:
//!
//! ```text
//! succ A C D            min-x point in [A, +inf) x [C, D]
//! sorted A B C D        points of [A, B] x [C, D] by x
//! 3sided A B C upper    [A, B] x (-inf, C]   (`lower`: [A, B] x [C, +inf))
//! maximal A B C D       maximal points of [A, B] x [C, D]
//! visible X Y           points visible from (X, Y), below-left
//! succ J PATTERN        text: leftmost occurrence at or after J
//! find PATTERN          text: occurrences in text order
//! find-rmq PATTERN      same stream, by range-minimum splitting
//! posfind I J PATTERN   text: occurrences starting in [I, J]
//! nonoverlap PATTERN    text: greedy non-overlapping occurrences
//! dontcare PATTERN      text: parts split on `*`, `\*` escapes a star
//! ```
//!
//! Point bounds accept `*` for an open side. A pattern is the rest of the
//! line after the fixed arguments.

use std::fmt;

use serde::Serialize;
use sorted_range::geometry::{maximal_points, rectangularly_visible};
use sorted_range::oracle::{
    naive_dont_care, naive_non_overlapping, naive_occurrences, naive_successive, oracle_maximal,
    oracle_report_sorted, oracle_successor, oracle_visible,
};
use sorted_range::text::split_dont_care;
use sorted_range::{AnyIndex, Error, Point, QueryRect, RankSpaceMap};

/// A failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Mismatch(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Mismatch(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Mismatch(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Parse { .. } | Error::Format(_) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Succ { a: i64, c: Option<i64>, d: Option<i64> },
    /// `sorted` and `3sided` both become a rectangle.
    Sorted(QueryRect),
    Maximal(QueryRect),
    Visible { x: i64, y: i64 },
    Next { j: usize, pattern: Vec<u8> },
    Find { pattern: Vec<u8>, rmq: bool },
    PosFind { i: usize, j: usize, pattern: Vec<u8> },
    NonOverlap { pattern: Vec<u8> },
    DontCare { parts: Vec<Vec<u8>> },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Splits off `count` whitespace-separated words; the rest (after one run
/// of separators) is returned verbatim.
fn words(line: &str, count: usize) -> (Vec<&str>, &str) {
    let mut rest = line.trim_start();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        if rest.is_empty() {
            break;
        }
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        out.push(&rest[..end]);
        rest = rest[end..].trim_start();
    }
    (out, rest)
}

fn int(s: &str) -> Result<i64, CliError> {
    s.parse().map_err(|_| usage(format!("expected an integer, found {s:?}")))
}

fn bound(s: &str) -> Result<Option<i64>, CliError> {
    if s == "*" {
        Ok(None)
    } else {
        int(s).map(Some)
    }
}

fn position(s: &str) -> Result<usize, CliError> {
    match s.parse::<usize>() {
        Ok(p) if p >= 1 => Ok(p),
        _ => Err(usage(format!("expected a 1-based position, found {s:?}"))),
    }
}

impl Query {
    /// Parses one query line. `text` selects the text reading of `succ`.
    pub fn parse(line: &str, text: bool) -> Result<Query, CliError> {
        let (head, _) = words(line, 1);
        let family = *head.first().ok_or_else(|| usage("empty query"))?;
        let fixed = |n: usize| -> Result<(Vec<&str>, &str), CliError> {
            let (w, rest) = words(line, n + 1);
            if w.len() != n + 1 {
                return Err(usage(format!("`{family}` takes {n} arguments")));
            }
            Ok((w[1..].to_vec(), rest))
        };
        let exact = |n: usize| -> Result<Vec<&str>, CliError> {
            let (w, rest) = fixed(n)?;
            if !rest.is_empty() {
                return Err(usage(format!("`{family}` takes {n} arguments")));
            }
            Ok(w)
        };
        let rect = |w: &[&str]| -> Result<QueryRect, CliError> {
            Ok(QueryRect::new(bound(w[0])?, bound(w[1])?, bound(w[2])?, bound(w[3])?)?)
        };
        Ok(match family {
            "succ" if text => {
                let (w, rest) = fixed(1)?;
                Query::Next { j: position(w[0])?, pattern: rest.as_bytes().to_vec() }
            }
            "succ" => {
                let w = exact(3)?;
                Query::Succ { a: int(w[0])?, c: bound(w[1])?, d: bound(w[2])? }
            }
            "sorted" => Query::Sorted(rect(&exact(4)?)?),
            "3sided" => {
                let w = exact(4)?;
                let (a, b, c) = (bound(w[0])?, bound(w[1])?, int(w[2])?);
                let q = match w[3] {
                    "upper" => QueryRect::new(a, b, None, Some(c))?,
                    "lower" => QueryRect::new(a, b, Some(c), None)?,
                    s => return Err(usage(format!("side must be upper or lower, found {s:?}"))),
                };
                Query::Sorted(q)
            }
            "maximal" => Query::Maximal(rect(&exact(4)?)?),
            "visible" => {
                let w = exact(2)?;
                Query::Visible { x: int(w[0])?, y: int(w[1])? }
            }
            "find" | "find-rmq" => {
                let (_, rest) = fixed(0)?;
                Query::Find { pattern: rest.as_bytes().to_vec(), rmq: family == "find-rmq" }
            }
            "posfind" => {
                let (w, rest) = fixed(2)?;
                let (i, j) = (position(w[0])?, position(w[1])?);
                if i > j {
                    return Err(usage("posfind needs I <= J"));
                }
                Query::PosFind { i, j, pattern: rest.as_bytes().to_vec() }
            }
            "nonoverlap" => {
                let (_, rest) = fixed(0)?;
                if rest.is_empty() {
                    return Err(usage("nonoverlap needs a nonempty pattern"));
                }
                Query::NonOverlap { pattern: rest.as_bytes().to_vec() }
            }
            "dontcare" => {
                let (_, rest) = fixed(0)?;
                let parts = split_dont_care(rest.as_bytes());
                if parts.iter().any(Vec::is_empty) {
                    return Err(usage("dontcare parts must be nonempty"));
                }
                Query::DontCare { parts }
            }
            other => return Err(usage(format!("unknown query family {other:?}"))),
        })
    }

    fn is_text(&self) -> bool {
        matches!(
            self,
            Query::Next { .. }
                | Query::Find { .. }
                | Query::PosFind { .. }
                | Query::NonOverlap { .. }
                | Query::DontCare { .. }
        )
    }
}

fn text(p: &[u8]) -> String {
    String::from_utf8_lossy(p).into_owned()
}

fn opt(b: Option<i64>) -> String {
    b.map_or("*".into(), |v| v.to_string())
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |q: &QueryRect| {
            format!("{} {} {} {}", opt(q.x_lo), opt(q.x_hi), opt(q.y_lo), opt(q.y_hi))
        };
        match self {
            Query::Succ { a, c, d } => write!(f, "succ {a} {} {}", opt(*c), opt(*d)),
            Query::Sorted(q) => write!(f, "sorted {}", r(q)),
            Query::Maximal(q) => write!(f, "maximal {}", r(q)),
            Query::Visible { x, y } => write!(f, "visible {x} {y}"),
            Query::Next { j, pattern } => write!(f, "succ {j} {}", text(pattern)),
            Query::Find { pattern, rmq } => {
                write!(f, "{} {}", if *rmq { "find-rmq" } else { "find" }, text(pattern))
            }
            Query::PosFind { i, j, pattern } => write!(f, "posfind {i} {j} {}", text(pattern)),
            Query::NonOverlap { pattern } => write!(f, "nonoverlap {}", text(pattern)),
            Query::DontCare { parts } => {
                let escaped: Vec<String> = parts
                    .iter()
                    .map(|p| text(p).replace('\\', "\\\\").replace('*', "\\*"))
                    .collect();
                write!(f, "dontcare {}", escaped.join("*"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Point(Option<Point>),
    Points(Vec<Point>),
    Position(Option<usize>),
    Positions(Vec<usize>),
    Embedding(Option<Vec<usize>>),
}

impl Answer {
    pub fn len(&self) -> usize {
        match self {
            Answer::Point(p) => p.is_some() as usize,
            Answer::Points(v) => v.len(),
            Answer::Position(p) => p.is_some() as usize,
            Answer::Positions(v) => v.len(),
            Answer::Embedding(e) => e.as_ref().map_or(0, Vec::len),
        }
    }

    /// One line per result; `absent` for an empty single answer.
    pub fn human(&self) -> Vec<String> {
        let pt = |p: &Point| format!("{},{}", p.x, p.y);
        match self {
            Answer::Point(Some(p)) => vec![pt(p)],
            Answer::Position(Some(i)) => vec![i.to_string()],
            Answer::Embedding(Some(v)) => {
                vec![v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")]
            }
            Answer::Point(None) | Answer::Position(None) | Answer::Embedding(None) => {
                vec!["absent".into()]
            }
            Answer::Points(v) => v.iter().map(pt).collect(),
            Answer::Positions(v) => v.iter().map(usize::to_string).collect(),
        }
    }

    fn map_points(self, map: &RankSpaceMap) -> Answer {
        match self {
            Answer::Point(p) => Answer::Point(p.map(|p| map.to_original(p))),
            Answer::Points(v) => Answer::Points(v.into_iter().map(|p| map.to_original(p)).collect()),
            other => other,
        }
    }
}

/// A loaded index plus what the oracles need.
pub struct Engine {
    pub index: AnyIndex,
    /// Rank-space points for point indexes.
    rank_points: Vec<Point>,
}

fn take<T>(it: impl Iterator<Item = T>, k: Option<usize>) -> Vec<T> {
    it.take(k.unwrap_or(usize::MAX)).collect()
}

impl Engine {
    pub fn new(index: AnyIndex) -> Self {
        let rank_points = match &index {
            AnyIndex::Successor(i) => i.rank_points(),
            AnyIndex::ThreeSided(i) => i.rank_points(),
            AnyIndex::Optimal2D(i) => i.rank_points(),
            AnyIndex::Text(_) => Vec::new(),
        };
        Engine { index, rank_points }
    }

    pub fn is_text(&self) -> bool {
        matches!(self.index, AnyIndex::Text(_))
    }

    fn map(&self) -> Option<&RankSpaceMap> {
        match &self.index {
            AnyIndex::Successor(i) => Some(i.map()),
            AnyIndex::ThreeSided(i) => Some(i.map()),
            AnyIndex::Optimal2D(i) => Some(i.map()),
            AnyIndex::Text(_) => None,
        }
    }

    fn unsupported(&self, q: &Query) -> CliError {
        usage(format!("a {} index cannot answer `{q}`", self.index.kind()))
    }

    /// Answers `q` in original coordinates.
    pub fn run(&self, q: &Query, k: Option<usize>) -> Result<Answer, CliError> {
        if q.is_text() != self.is_text() {
            return Err(self.unsupported(q));
        }
        if let AnyIndex::Text(ti) = &self.index {
            return Ok(match q {
                Query::Next { j, pattern } => Answer::Position(ti.successive_list_index(pattern, *j)),
                Query::Find { pattern, rmq: false } => Answer::Positions(take(ti.ordered_occurrences(pattern, k), None)),
                Query::Find { pattern, rmq: true } => Answer::Positions(take(ti.ordered_occurrences_rmq(pattern), k)),
                Query::PosFind { i, j, pattern } => Answer::Positions(take(ti.position_restricted(pattern, *i, *j, k), None)),
                Query::NonOverlap { pattern } => Answer::Positions(take(ti.non_overlapping_sequence(pattern)?.into_iter(), k)),
                Query::DontCare { parts } => Answer::Embedding(ti.dont_care_match(parts)?),
                _ => unreachable!(),
            });
        }
        let map = self.map().expect("point index");
        let rank = match (q, &self.index) {
            (Query::Succ { a, c, d }, AnyIndex::Successor(i)) => {
                let rq = map.reduce_query(&QueryRect { x_lo: Some(*a), x_hi: None, y_lo: *c, y_hi: *d });
                let (c, d) = (rq.y_lo.unwrap_or(1), rq.y_hi.unwrap_or(i64::MAX));
                Answer::Point(i.range_successor(rq.x_lo.unwrap(), c, d))
            }
            (Query::Sorted(q), AnyIndex::Successor(i)) => {
                Answer::Points(take(i.sorted_iter(&map.reduce_query(q)), k))
            }
            (Query::Sorted(q), AnyIndex::Optimal2D(i)) => {
                Answer::Points(take(i.sorted_iter(&map.reduce_query(q)), k))
            }
            (Query::Sorted(rect), AnyIndex::ThreeSided(i)) => {
                let it = i.sorted_iter(&map.reduce_query(rect)).map_err(|_| self.unsupported(q))?;
                Answer::Points(take(it, k))
            }
            (Query::Maximal(q), AnyIndex::Successor(i)) => {
                Answer::Points(take(maximal_points(i, &map.reduce_query(q)), k))
            }
            (Query::Visible { x, y }, AnyIndex::Successor(i)) => {
                let it = rectangularly_visible(i, map.x_rank_at_most(*x), map.y_rank_at_most(*y));
                Answer::Points(take(it, k))
            }
            _ => return Err(self.unsupported(q)),
        };
        Ok(rank.map_points(map))
    }

    /// The brute-force answer to `q`.
    pub fn oracle(&self, q: &Query, k: Option<usize>) -> Result<Answer, CliError> {
        if let AnyIndex::Text(ti) = &self.index {
            let t = ti.text();
            let cut = |v: Vec<usize>| take(v.into_iter(), k);
            return Ok(match q {
                Query::Next { j, pattern } => Answer::Position(naive_successive(t, pattern, *j)),
                Query::Find { pattern, .. } => Answer::Positions(cut(naive_occurrences(t, pattern))),
                Query::PosFind { i, j, pattern } => Answer::Positions(cut(
                    naive_occurrences(t, pattern).into_iter().filter(|p| p >= i && p <= j).collect(),
                )),
                Query::NonOverlap { pattern } => Answer::Positions(cut(naive_non_overlapping(t, pattern))),
                Query::DontCare { parts } => {
                    let parts: Vec<&[u8]> = parts.iter().map(Vec::as_slice).collect();
                    Answer::Embedding(naive_dont_care(t, &parts))
                }
                _ => return Err(self.unsupported(q)),
            });
        }
        let map = self.map().expect("point index");
        let pts = &self.rank_points;
        let rank = match q {
            Query::Succ { a, c, d } => {
                let rq = map.reduce_query(&QueryRect { x_lo: Some(*a), x_hi: None, y_lo: *c, y_hi: *d });
                Answer::Point(oracle_successor(pts, &rq))
            }
            Query::Sorted(q) => Answer::Points(oracle_report_sorted(pts, &map.reduce_query(q), k)),
            Query::Maximal(q) => Answer::Points(take(oracle_maximal(pts, &map.reduce_query(q)).into_iter(), k)),
            Query::Visible { x, y } => Answer::Points(take(
                oracle_visible(pts, map.x_rank_at_most(*x), map.y_rank_at_most(*y)).into_iter(),
                k,
            )),
            _ => return Err(self.unsupported(q)),
        };
        Ok(rank.map_points(map))
    }

    /// Coordinate range of the indexed points, for generating workloads.
    pub fn extent(&self) -> (i64, i64, i64, i64) {
        match self.map() {
            Some(m) => {
                let (xs, ys) = (m.x_sorted(), m.y_sorted());
                (xs[0], xs[xs.len() - 1], ys[0], ys[ys.len() - 1])
            }
            None => (1, self.index.len() as i64, 1, self.index.len() as i64),
        }
    }

    pub fn text(&self) -> Option<&[u8]> {
        match &self.index {
            AnyIndex::Text(ti) => Some(ti.text()),
            _ => None,
        }
    }
}
