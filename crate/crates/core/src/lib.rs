//! Partially-dynamic all-pairs shortest paths in directed graphs, organized
//! around *hub sets*: small vertex sets that hit some shortest path between
//! every reachable pair at least every `d` hops.
//!
//! The crate is layered bottom-up:
//!
//! * [`graph`] — the dynamic digraph, update ops, update streams, and
//!   restricted weight rounding.
//! * [`dyntree`] — Euler-tour forests with whole-tree depth queries in
//!   O(log n) per link/cut.
//! * [`sssp`] — Even-Shiloach trees (exact, depth-bounded, unweighted) and
//!   hop-bounded `(1+eps)`-approximate single-source structures for weighted
//!   graphs.
//! * [`blockers`] — blocker sets of rooted tree collections: greedy
//!   construction, random candidates, Las Vegas verification, and an
//!   incremental monitor.
//! * [`hubs`] — hub sets and hub families: constructions from tree blockers,
//!   covering oracles, and the family monitor that turns blocker checks into
//!   a certified hub-set invariant.
//! * [`apsp`] — the four pipelines: dense/sparse incremental APSP and
//!   exact/approximate decremental APSP, plus the Las Vegas restart wrapper.

pub mod apsp;
pub mod blockers;
pub mod dyntree;
pub mod graph;
pub mod hubs;
pub mod sssp;

pub use graph::{DynamicDigraph, EdgeWeight, GraphView, Mode, UpdateOp, UpdateStream, Vertex};
