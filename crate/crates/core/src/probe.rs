//! Per-thread operation counters.
//!
//! Query code bumps these as it touches tree nodes, range-extremum
//! structures, predecessor dictionaries and stored levels. Counts are exact
//! and deterministic for a given index and query, so they can stand in for
//! wall-clock measurements when checking cost bounds.

use std::cell::Cell;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeCounts {
    /// Tree nodes at which a query did real work (extremum probe, list scan).
    pub nodes_visited: u64,
    pub rmq_probes: u64,
    pub pred_probes: u64,
    /// `point(v, i)` decodes.
    pub points_decoded: u64,
    /// Bitvector hops taken while decoding towards a stored level.
    pub decode_hops: u64,
    /// Rank operations spent translating index ranges between levels.
    pub rank_steps: u64,
}

impl Sub for ProbeCounts {
    type Output = ProbeCounts;

    fn sub(self, o: ProbeCounts) -> ProbeCounts {
        ProbeCounts {
            nodes_visited: self.nodes_visited - o.nodes_visited,
            rmq_probes: self.rmq_probes - o.rmq_probes,
            pred_probes: self.pred_probes - o.pred_probes,
            points_decoded: self.points_decoded - o.points_decoded,
            decode_hops: self.decode_hops - o.decode_hops,
            rank_steps: self.rank_steps - o.rank_steps,
        }
    }
}

impl Add for ProbeCounts {
    type Output = ProbeCounts;

    fn add(self, o: ProbeCounts) -> ProbeCounts {
        ProbeCounts {
            nodes_visited: self.nodes_visited + o.nodes_visited,
            rmq_probes: self.rmq_probes + o.rmq_probes,
            pred_probes: self.pred_probes + o.pred_probes,
            points_decoded: self.points_decoded + o.points_decoded,
            decode_hops: self.decode_hops + o.decode_hops,
            rank_steps: self.rank_steps + o.rank_steps,
        }
    }
}

thread_local! {
    static COUNTS: Cell<ProbeCounts> = const {
        Cell::new(ProbeCounts {
            nodes_visited: 0,
            rmq_probes: 0,
            pred_probes: 0,
            points_decoded: 0,
            decode_hops: 0,
            rank_steps: 0,
        })
    };
}

#[inline]
fn bump(f: impl FnOnce(&mut ProbeCounts)) {
    COUNTS.with(|c| {
        let mut v = c.get();
        f(&mut v);
        c.set(v);
    });
}

#[inline]
pub(crate) fn node_visit() {
    bump(|c| c.nodes_visited += 1);
}

#[inline]
pub(crate) fn rmq_probe() {
    bump(|c| c.rmq_probes += 1);
}

#[inline]
pub(crate) fn pred_probe() {
    bump(|c| c.pred_probes += 1);
}

#[inline]
pub(crate) fn point_decoded(hops: u64) {
    bump(|c| {
        c.points_decoded += 1;
        c.decode_hops += hops;
    });
}

#[inline]
pub(crate) fn rank_step() {
    bump(|c| c.rank_steps += 1);
}

/// Current totals for this thread.
pub fn snapshot() -> ProbeCounts {
    COUNTS.with(|c| c.get())
}

/// Runs `f` and returns its result with the counts it accumulated.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, ProbeCounts) {
    let before = snapshot();
    let r = f();
    (r, snapshot() - before)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_isolates_counts() {
        node_visit();
        let ((), c) = measure(|| {
            node_visit();
            rmq_probe();
            point_decoded(3);
        });
        assert_eq!(c.nodes_visited, 1);
        assert_eq!(c.rmq_probes, 1);
        assert_eq!(c.points_decoded, 1);
        assert_eq!(c.decode_hops, 3);
    }
}
