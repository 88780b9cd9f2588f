//! Solvers, refinement, oracles, matching, and bounds for maximum quorum
//! colorings.

pub mod bounds;
pub mod matching;
pub mod oracle;
pub mod refine;
pub mod solver;

pub use bounds::{
    closed_form_perfect_binary, exact_binary, matching_lower_bound, psi_q_forest, BoundError,
};
pub use matching::{matching_number_forest, Matching, MatchingError};
pub use oracle::{
    brute_force_graph, brute_force_tree, OracleError, DEFAULT_GRAPH_LIMIT, DEFAULT_TREE_LIMIT,
};
pub use refine::{refine_coloring, RefineError, RefineStep, RefineTrace};
pub use solver::{alpha_closed, solve_per_level, AlphaTrace, OpCounts, SolveError};
