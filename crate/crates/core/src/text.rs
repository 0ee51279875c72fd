//! Substring search in text order.
//!
//! A text `T[1..n]` is mapped to its position set: one point
//! `(i, rank of T[i..])` per suffix. The suffixes starting with a pattern
//! `P` form a contiguous rank interval `[left, right]`, so the occurrences
//! of `P` in a window `[i, j]` are the points of `[i, j] x [left, right]`,
//! and sorted reporting over the position set lists them in text order.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::iter::FusedIterator;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Point, QueryRect};
use crate::successor::{SortedIter, StridePolicy, SuccessorIndex};
use crate::succinct::{Extremum, RmqIndex, RmqMode};

/// Suffix ranks `left..=right` (1-based); empty when `left > right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRange {
    pub left: usize,
    pub right: usize,
}

impl PatternRange {
    pub fn is_empty(&self) -> bool {
        self.left > self.right
    }

    pub fn len(&self) -> usize {
        (self.right + 1).saturating_sub(self.left)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextIndex {
    text: Vec<u8>,
    /// `sa[r - 1]` is the start (1-based) of the rank-`r` suffix.
    sa: Vec<u32>,
    /// `rank[i - 1]` is the rank of the suffix starting at `i`.
    rank: Vec<u32>,
    /// Range-minimum over `sa`.
    sa_min: RmqIndex,
    positions: SuccessorIndex,
}

/// 0-based suffix array by prefix doubling with two counting-sort passes
/// per round.
pub fn suffix_array(text: &[u8]) -> Vec<u32> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    // class 0 is reserved for "past the end"
    let mut class: Vec<usize> = text.iter().map(|&b| b as usize + 1).collect();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut tmp = vec![0usize; n];
    let mut classes = 257;
    let mut k = 1;
    loop {
        let second = |i: usize| if i + k < n { class[i + k] } else { 0 };
        let mut count = vec![0usize; classes.max(n + 1) + 1];
        for i in 0..n {
            count[second(i) + 1] += 1;
        }
        for c in 1..count.len() {
            count[c] += count[c - 1];
        }
        for i in 0..n {
            let c = second(i);
            tmp[count[c]] = i;
            count[c] += 1;
        }
        count.iter_mut().for_each(|c| *c = 0);
        for i in 0..n {
            count[class[i] + 1] += 1;
        }
        for c in 1..count.len() {
            count[c] += count[c - 1];
        }
        for &i in &tmp {
            let c = class[i];
            sa[count[c]] = i;
            count[c] += 1;
        }
        let mut next = vec![0usize; n];
        let mut c = 1;
        next[sa[0]] = 1;
        for w in sa.windows(2) {
            if (class[w[0]], second(w[0])) != (class[w[1]], second(w[1])) {
                c += 1;
            }
            next[w[1]] = c;
        }
        class = next;
        classes = c + 1;
        if c == n {
            break;
        }
        k *= 2;
    }
    sa.into_iter().map(|i| i as u32).collect()
}

impl TextIndex {
    pub fn build(text: &[u8]) -> Result<Self> {
        Self::with_stride(text, StridePolicy::LogLog.resolve(text.len()))
    }

    pub fn with_stride(text: &[u8], stride: u32) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyInput);
        }
        if text.len() >= u32::MAX as usize {
            return Err(Error::Config("text too long".into()));
        }
        let sa: Vec<u32> = suffix_array(text).into_iter().map(|i| i + 1).collect();
        let mut rank = vec![0u32; sa.len()];
        for (r, &i) in sa.iter().enumerate() {
            rank[i as usize - 1] = r as u32 + 1;
        }
        let points: Vec<Point> = rank
            .iter()
            .enumerate()
            .map(|(i, &r)| Point::new(i as i64 + 1, r as i64, i))
            .collect();
        let positions = SuccessorIndex::build(&points, stride)?;
        let sa_min = RmqIndex::build(&sa, RmqMode::Min);
        Ok(TextIndex { text: text.to_vec(), sa, rank, sa_min, positions })
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    /// 1-based suffix array.
    pub fn suffix_array(&self) -> &[u32] {
        &self.sa
    }

    /// Rank (1-based) of the suffix starting at `i` (1-based).
    pub fn rank_of(&self, i: usize) -> usize {
        self.rank[i - 1] as usize
    }

    pub fn position_set(&self) -> &SuccessorIndex {
        &self.positions
    }

    /// Start of the rank-`r` suffix, found through the position set.
    pub fn suffix_of_rank(&self, r: usize) -> Option<usize> {
        let q = QueryRect { x_lo: None, x_hi: None, y_lo: Some(r as i64), y_hi: Some(r as i64) };
        self.positions.sorted_iter(&q).next().map(|p| p.x as usize)
    }

    /// How the rank-`r` suffix compares with `p` on its first `|p|` bytes.
    fn cmp_prefix(&self, r: usize, p: &[u8]) -> Ordering {
        let s = &self.text[self.sa[r] as usize - 1..];
        s[..s.len().min(p.len())].cmp(p)
    }

    pub fn pattern_range(&self, p: &[u8]) -> PatternRange {
        let n = self.sa.len();
        let lo = partition(n, |r| self.cmp_prefix(r, p) == Ordering::Less);
        let hi = partition(n, |r| self.cmp_prefix(r, p) != Ordering::Greater);
        PatternRange { left: lo + 1, right: hi }
    }

    /// Leftmost occurrence of `p` starting at or after `j`.
    pub fn successive_list_index(&self, p: &[u8], j: usize) -> Option<usize> {
        let pr = self.pattern_range(p);
        if pr.is_empty() {
            return None;
        }
        self.positions
            .range_successor(j as i64, pr.left as i64, pr.right as i64)
            .map(|pt| pt.x as usize)
    }

    /// Greedy leftmost chain of occurrences at least `|p|` apart.
    pub fn non_overlapping_sequence(&self, p: &[u8]) -> Result<Vec<usize>> {
        if p.is_empty() {
            return Err(Error::InvalidQuery("pattern must be nonempty".into()));
        }
        let mut out = Vec::new();
        let mut j = 1;
        while let Some(i) = self.successive_list_index(p, j) {
            out.push(i);
            j = i + p.len();
        }
        Ok(out)
    }

    /// Leftmost embedding of `parts[0]`, `parts[1]`, ... in order, each part
    /// starting after the previous one ends.
    pub fn dont_care_match<P: AsRef<[u8]>>(&self, parts: &[P]) -> Result<Option<Vec<usize>>> {
        if parts.is_empty() || parts.iter().any(|p| p.as_ref().is_empty()) {
            return Err(Error::InvalidQuery("gapped patterns need nonempty parts".into()));
        }
        let mut out = Vec::with_capacity(parts.len());
        let mut from = 1;
        for part in parts {
            let part = part.as_ref();
            match self.successive_list_index(part, from) {
                Some(j) => {
                    out.push(j);
                    from = j + part.len();
                }
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// Occurrences of `p` in text order, at most `k` of them.
    pub fn ordered_occurrences(&self, p: &[u8], k: Option<usize>) -> Occurrences<'_> {
        self.position_restricted(p, 1, self.len(), k)
    }

    /// Occurrences of `p` starting in `[i, j]`, in text order.
    pub fn position_restricted(&self, p: &[u8], i: usize, j: usize, k: Option<usize>) -> Occurrences<'_> {
        let pr = self.pattern_range(p);
        let q = if pr.is_empty() || i > j {
            QueryRect::closed(1, 0, 1, 0)
        } else {
            QueryRect::closed(i as i64, j as i64, pr.left as i64, pr.right as i64)
        };
        Occurrences { inner: self.positions.sorted_iter(&q), left: k.unwrap_or(usize::MAX) }
    }

    /// Occurrences of `p` in text order, by repeated range-minimum queries
    /// over the suffix array.
    pub fn ordered_occurrences_rmq(&self, p: &[u8]) -> RmqOccurrences<'_> {
        let pr = self.pattern_range(p);
        let mut it = RmqOccurrences { idx: self, heap: BinaryHeap::new() };
        if !pr.is_empty() {
            it.push(pr.left - 1, pr.right - 1);
        }
        it
    }

    pub fn size_in_bytes(&self) -> usize {
        self.text.len() + 8 * self.sa.len() + self.sa_min.size_in_bytes() + self.positions.size_in_bytes()
    }
}

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

/// Splits a gapped pattern on `*`; `\*` is a literal star and `\\` a
/// literal backslash.
pub fn split_dont_care(pattern: &[u8]) -> Vec<Vec<u8>> {
    let mut parts = vec![Vec::new()];
    let mut bytes = pattern.iter().copied().peekable();
    while let Some(b) = bytes.next() {
        match b {
            b'\\' if matches!(bytes.peek(), Some(b'*' | b'\\')) => {
                parts.last_mut().unwrap().push(bytes.next().unwrap());
            }
            b'*' => parts.push(Vec::new()),
            _ => parts.last_mut().unwrap().push(b),
        }
    }
    parts
}

/// Occurrence positions (1-based) in ascending order.
#[derive(Clone, Debug)]
pub struct Occurrences<'a> {
    inner: SortedIter<'a>,
    left: usize,
}

impl Iterator for Occurrences<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        self.inner.next().map(|p| p.x as usize)
    }
}

impl FusedIterator for Occurrences<'_> {}

/// Priority queue of `(position, rank, interval)`: each extraction reports
/// the smallest start in its rank interval and queues the two sides.
#[derive(Clone, Debug)]
pub struct RmqOccurrences<'a> {
    idx: &'a TextIndex,
    heap: BinaryHeap<Reverse<(u32, usize, usize, usize)>>,
}

impl RmqOccurrences<'_> {
    /// Queues the minimum of `sa[l..=r]` (0-based ranks).
    fn push(&mut self, l: usize, r: usize) {
        let sa = &self.idx.sa;
        let i = self.idx.sa_min.query_with(l, r, Extremum::Min, |t| sa[t]);
        self.heap.push(Reverse((sa[i], i, l, r)));
    }

    /// Entries waiting in the queue.
    pub fn queued(&self) -> usize {
        self.heap.len()
    }
}

impl Iterator for RmqOccurrences<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let Reverse((pos, i, l, r)) = self.heap.pop()?;
        if i > l {
            self.push(l, i - 1);
        }
        if i < r {
            self.push(i + 1, r);
        }
        Some(pos as usize)
    }
}

impl FusedIterator for RmqOccurrences<'_> {}
