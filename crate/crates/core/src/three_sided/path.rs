//! Per-leaf tables of the nodes hanging off a root-to-leaf path.
//!
//! For leaf `i`, the table lists `(lowest y, level)` for each sibling on one
//! side of the path, plus the leaf itself at level `depth + 1`. Entries are
//! sorted by y and carry the OR of level bits of all entries up to them, so
//! "levels whose node has a point with `y <= c`" is one binary search.

use serde::{Deserialize, Serialize};

use crate::model::Point;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(super) struct PathTable {
    /// `start[i]..start[i + 1]` are the entries of leaf `i`.
    start: Vec<u32>,
    ys: Vec<u32>,
    masks: Vec<u64>,
}

/// Bits `from + 1 ..= depth + 1`.
pub(super) fn levels_above(from: u32, depth: u32) -> u64 {
    let upto = if depth + 2 >= 64 { u64::MAX } else { (1u64 << (depth + 2)) - 1 };
    upto & !((1u64 << (from + 1)) - 1)
}

impl PathTable {
    /// `right` selects right siblings of on-path left children; otherwise
    /// left siblings of on-path right children.
    pub(super) fn build(
        m: usize,
        depth: u32,
        right: bool,
        lowest: impl Fn(u32, usize) -> Option<Point>,
    ) -> Self {
        assert!(depth < 62, "tree too deep for level masks");
        let mut start = Vec::with_capacity(m + 1);
        let mut ys = Vec::new();
        let mut masks = Vec::new();
        let mut entries: Vec<(u32, u32)> = Vec::with_capacity(depth as usize + 1);
        for leaf in 0..m {
            start.push(ys.len() as u32);
            entries.clear();
            // x of the entries by increasing level: falls for right
            // siblings, rises for left siblings.
            let mut last_x: Option<i64> = None;
            let mut check = |x: i64| {
                if let Some(prev) = last_x {
                    assert!(if right { x < prev } else { x > prev }, "path entries out of x order");
                }
                last_x = Some(x);
            };
            for level in 1..=depth {
                let on_path = leaf >> (depth - level);
                let sib = match (right, on_path & 1) {
                    (true, 0) => on_path + 1,
                    (false, 1) => on_path - 1,
                    _ => continue,
                };
                if let Some(p) = lowest(level, sib) {
                    check(p.x);
                    entries.push((p.y as u32, level));
                }
            }
            let own = lowest(depth, leaf).expect("leaf exists");
            check(own.x);
            entries.push((own.y as u32, depth + 1));
            entries.sort_unstable();
            let mut acc = 0u64;
            for &(y, level) in &entries {
                acc |= 1 << level;
                ys.push(y);
                masks.push(acc);
            }
        }
        start.push(ys.len() as u32);
        PathTable { start, ys, masks }
    }

    /// Level bits of the nodes (and leaf) on this side of `leaf`'s path
    /// holding a point with `y <= c`.
    pub(super) fn mask(&self, leaf: usize, c: i64) -> u64 {
        let (s, e) = (self.start[leaf] as usize, self.start[leaf + 1] as usize);
        let ys = &self.ys[s..e];
        let k = if c < 0 { 0 } else { ys.partition_point(|&y| y as i64 <= c) };
        if k == 0 {
            0
        } else {
            self.masks[s + k - 1]
        }
    }

    pub(super) fn size_in_bytes(&self) -> usize {
        4 * self.start.len() + 4 * self.ys.len() + 8 * self.masks.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_masks() {
        assert_eq!(levels_above(0, 3), 0b11110);
        assert_eq!(levels_above(3, 3), 0b10000);
        assert_eq!(levels_above(2, 2), 0b1000);
    }

    #[test]
    fn table_of_four_leaves() {
        // leaves 0..4 with y = [4, 1, 3, 2]; depth 2
        let ys = [4i64, 1, 3, 2];
        let lowest = |level: u32, off: usize| -> Option<Point> {
            let w = 1usize << (2 - level);
            let lo = off * w;
            (lo < 4).then(|| {
                let (i, &y) = ys[lo..lo + w].iter().enumerate().min_by_key(|e| e.1).unwrap();
                Point::new((lo + i) as i64, y, lo + i)
            })
        };
        let right_siblings = PathTable::build(4, 2, true, lowest);
        // leaf 0: right sibling at level 1 (y 2), at level 2 (y 1), itself (y 4)
        assert_eq!(right_siblings.mask(0, 0), 0);
        assert_eq!(right_siblings.mask(0, 1), 0b100);
        assert_eq!(right_siblings.mask(0, 2), 0b110);
        assert_eq!(right_siblings.mask(0, 4), 0b1110);
        // leaf 3 has no right siblings
        assert_eq!(right_siblings.mask(3, 10), 0b1000);
        let left_siblings = PathTable::build(4, 2, false, lowest);
        assert_eq!(left_siblings.mask(3, 1), 0b010);
        assert_eq!(left_siblings.mask(3, 2), 0b1010);
        assert_eq!(left_siblings.mask(3, 3), 0b1110);
    }
}
