//! Lower bounds and exact counts for maximum quorum colorings of trees.

use thiserror::Error;

use crate::algorithms::matching::matching_number_forest;
use crate::tree::RootedTree;

/// Errors from the bound and exact-count computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    /// Single-vertex trees are out of scope for the bounds (their maximum is
    /// trivially 1).
    #[error("tree has fewer than 2 vertices; its maximum quorum coloring is the single class")]
    TrivialTree,
    /// The exact binary formula needs maximum degree ≤ 3.
    #[error("tree has maximum degree {max_degree}, but the exact formula needs ≤ 3")]
    NotBinary { max_degree: usize },
    /// The closed form exceeds the 64-bit range.
    #[error("closed form overflows 64 bits at height {height}")]
    Overflow { height: usize },
}

/// Lower bound on the maximum quorum class count of a tree with n ≥ 2
/// vertices:
///
///   μ(internal forest) + n − Σ over internal v of ⌊deg(v)/2⌋,
///
/// where internal means degree ≥ 2. Every quorum class must spend ⌊deg(v)/2⌋
/// vertices defending each internal member v, and matched internal pairs
/// share that cost, which is where the matching term comes from.
pub fn matching_lower_bound(tree: &RootedTree) -> Result<usize, BoundError> {
    let n = tree.vertex_count();
    if n < 2 {
        return Err(BoundError::TrivialTree);
    }
    let (forest, _) = tree.internal_forest();
    let mu = matching_number_forest(&forest)
        .expect("internal forest of a tree is a forest")
        .size();
    let halves: usize =
        (0..n).map(|v| tree.degree(v)).filter(|&d| d >= 2).map(|d| d / 2).sum();
    Ok(mu + n - halves)
}

/// Exact maximum quorum class count for trees of maximum degree ≤ 3 with
/// n ≥ 2 vertices: μ(internal forest) + number of leaves.
pub fn exact_binary(tree: &RootedTree) -> Result<usize, BoundError> {
    let n = tree.vertex_count();
    if n < 2 {
        return Err(BoundError::TrivialTree);
    }
    let max_degree = tree.max_degree();
    if max_degree > 3 {
        return Err(BoundError::NotBinary { max_degree });
    }
    // With degrees ≤ 3 the generic bound is tight: ⌊d/2⌋ = 1 for every
    // internal vertex, so n − Σ⌊d/2⌋ is exactly the leaf count.
    let (forest, _) = tree.internal_forest();
    let mu = matching_number_forest(&forest)
        .expect("internal forest of a tree is a forest")
        .size();
    let leaves = (0..n).filter(|&v| tree.degree(v) <= 1).count();
    Ok(mu + leaves)
}

/// Maximum quorum class count of the perfect binary tree of height `h`:
/// 1 for h = 0, otherwise (2^(h+2) − 2^(h mod 2)) / 3. Heights ≥ 62
/// overflow 64 bits.
pub fn closed_form_perfect_binary(height: usize) -> Result<u64, BoundError> {
    if height == 0 {
        return Ok(1);
    }
    if height + 2 >= 64 {
        return Err(BoundError::Overflow { height });
    }
    let pow = 1u64 << (height + 2);
    let r = if height.is_multiple_of(2) { 1 } else { 2 };
    Ok((pow - r) / 3)
}

/// Maximum quorum class count of a forest from its per-tree counts: classes
/// never span components, so the total is the sum.
pub fn psi_q_forest(per_tree: &[usize]) -> usize {
    debug_assert!(per_tree.iter().all(|&k| k >= 1), "every tree has at least one class");
    per_tree.iter().try_fold(0usize, |acc, &k| acc.checked_add(k)).expect("sum overflows usize")
}
