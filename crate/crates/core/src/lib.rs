//! Sorted orthogonal range reporting.
//!
//! Points on an `n x n` grid are indexed so that the points of a query
//! rectangle can be streamed in ascending x order and stopped after any
//! prefix. The crate provides
//!
//! * [`SuccessorIndex`]: range successor queries over a compact range tree,
//!   and sorted reporting by repeated successor queries;
//! * [`ThreeSidedIndex`]: sorted reporting for `[a, b] x (-inf, c]` and
//!   `[a, b] x [c, +inf)`;
//! * [`Optimal2DIndex`]: four-sided sorted reporting over group-decomposed
//!   nodes;
//! * [`TextIndex`]: ordered and position-restricted substring search,
//!   successive list indexing, non-overlapping occurrences and patterns with
//!   variable-length gaps;
//! * [`geometry`]: maximal points in a rectangle and rectangular visibility.
//!
//! All structures are static, immutable after construction and checked
//! against the brute-force routines in [`oracle`].

pub mod error;
pub mod geometry;
pub mod model;
pub mod online;
pub mod optimal;
pub mod oracle;
pub mod persist;
pub mod probe;
pub mod range_tree;
pub mod succinct;
pub mod successor;
pub mod text;
pub mod three_sided;

pub use error::{Error, Result};
pub use model::{rank_space_reduce, Point, QueryRect, RankSpaceMap};
pub use online::{online_collect, Online};
pub use optimal::{Optimal2DIndex, OptimalConfig};
pub use persist::{AnyIndex, BuildConfig, IndexFile, IndexKind};
pub use range_tree::{CompactRangeTree, NodeRef};
pub use successor::{SortedIter, StridePolicy, SuccessorIndex};
pub use text::{PatternRange, TextIndex};
pub use three_sided::{OneSidedIndex, ThreeSidedIndex, YLimit};
