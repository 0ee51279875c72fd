//! Static building blocks: rank bitvectors, constant-time range extrema and
//! a bucketed predecessor dictionary.

mod bitvec;
mod pred;
mod rmq;

pub use bitvec::RankBitVec;
pub use pred::{Direction, PredecessorSet};
pub use rmq::{sparse_entries_formula, Extremum, RangeMinMax, RmqIndex, RmqMode};
