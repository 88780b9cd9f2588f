//! Quorum colorings of rooted trees: partition the vertices so every vertex
//! has at least half of its closed neighborhood in its own class, using as
//! many classes as possible.
//!
//! The crate provides:
//!
//! - [`tree`]: a compact rooted-tree representation with level indexing and
//!   shape classification (perfect per-level trees and relatives).
//! - [`coloring`]: partitions, quorum verification, cost-effectiveness and
//!   class-size diagnostics.
//! - [`algorithms`]: a linear-time optimal solver for perfect per-level
//!   trees, a refinement pass that grows any valid coloring to a
//!   cost-effective one, exhaustive oracles for small instances, and
//!   matching-based bounds with closed forms for the binary case.
//! - [`generators`]: deterministic instance generators.
//! - [`formats`]: text and JSON round-trip formats, result records, and
//!   Graphviz export.

pub mod algorithms;
pub mod coloring;
pub mod formats;
pub mod generators;
pub mod tree;

pub use algorithms::{
    alpha_closed, brute_force_graph, brute_force_tree, closed_form_perfect_binary, exact_binary,
    matching_lower_bound, refine_coloring, solve_per_level, AlphaTrace, OpCounts, RefineTrace,
};
pub use coloring::{is_cost_effective, quorum_requirement, verify_quorum, Coloring, Graph};
pub use generators::ShapeSpec;
pub use tree::{RootedTree, ShapeClass};
