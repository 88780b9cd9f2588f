//! Exponential brute-force oracles, used to validate the fast paths on small
//! instances.
//!
//! Tree oracle: some maximum quorum coloring has only connected classes (a
//! disconnected class splits into its components without changing any
//! vertex's same-class closed neighborhood, and that only raises the class
//! count), and on a tree connected partitions are exactly the partitions
//! induced by cutting a subset of edges. So the tree oracle enumerates all
//! 2^(n−1) edge subsets instead of all set partitions.
//!
//! Graph oracle: enumerates every set partition via restricted growth
//! strings.

use rayon::prelude::*;
use thiserror::Error;

use crate::coloring::{quorum_requirement, Coloring, Graph};
use crate::tree::RootedTree;

/// Default vertex cap for the tree oracle (2^(n−1) masks).
pub const DEFAULT_TREE_LIMIT: usize = 20;
/// Default vertex cap for the graph oracle (Bell(n) partitions).
pub const DEFAULT_GRAPH_LIMIT: usize = 10;

/// Errors from the brute-force oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// The instance exceeds the configured exponential-search cap.
    #[error("instance with {n} vertices exceeds the brute-force limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Edge-cut encoding: bit b of a mask cuts the parent edge of the (b+1)-th
/// vertex in index order skipping the root.
struct CutEval {
    /// edge_child[b] = child endpoint of edge b.
    edge_child: Vec<usize>,
    /// child_bit[v] = bit index of v's parent edge (unused at the root).
    child_bit: Vec<usize>,
    /// vertices in level order (root first), used to assign component ids
    /// top-down.
    order: Vec<usize>,
    need: Vec<usize>,
}

impl CutEval {
    fn new(tree: &RootedTree) -> Self {
        let n = tree.vertex_count();
        let edge_child: Vec<usize> = (0..n).filter(|&v| v != tree.root()).collect();
        let mut child_bit = vec![usize::MAX; n];
        for (b, &c) in edge_child.iter().enumerate() {
            child_bit[c] = b;
        }
        let mut order = Vec::with_capacity(n);
        for d in 0..=tree.height() {
            order.extend_from_slice(tree.level(d));
        }
        let need = (0..n).map(|v| quorum_requirement(tree.degree(v))).collect();
        CutEval { edge_child, child_bit, order, need }
    }

    /// Component id per vertex under the mask (parents first, so ids are
    /// assigned top-down), into `comp`.
    fn components(&self, tree: &RootedTree, mask: u64, comp: &mut [usize]) {
        let mut next = 0usize;
        for &v in &self.order {
            match tree.parent(v) {
                Some(p) if mask & (1 << self.child_bit[v]) == 0 => comp[v] = comp[p],
                _ => {
                    comp[v] = next;
                    next += 1;
                }
            }
        }
    }

    /// Whether the component partition satisfies the quorum condition.
    fn valid(&self, tree: &RootedTree, mask: u64, comp: &mut [usize], same: &mut [usize]) -> bool {
        self.components(tree, mask, comp);
        same.fill(1);
        for &v in &self.edge_child {
            let p = tree.parent(v).expect("non-root");
            if comp[v] == comp[p] {
                same[v] += 1;
                same[p] += 1;
            }
        }
        same.iter().zip(&self.need).all(|(s, n)| s >= n)
    }
}

/// Maximum quorum coloring of a tree by exhaustive edge-cut search.
///
/// Returns (ψ_q, witness coloring). Deterministic regardless of thread
/// count: among all maximizing cut sets the numerically smallest mask wins,
/// and the parallel reduction (larger class count, then smaller mask) is
/// associative. Errors with `TooLarge` when `n > limit`.
pub fn brute_force_tree(tree: &RootedTree, limit: usize) -> Result<(usize, Coloring), OracleError> {
    let n = tree.vertex_count();
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    let eval = CutEval::new(tree);
    let m = n - 1;

    let best = (0u64..1u64 << m)
        .into_par_iter()
        .map_init(
            || (vec![0usize; n], vec![0usize; n]),
            |(comp, same), mask| {
                // k = cuts + 1; checking validity only when the mask could win
                // keeps the scan cheap without affecting the outcome.
                let k = mask.count_ones() as usize + 1;
                eval.valid(tree, mask, comp, same).then_some((k, mask))
            },
        )
        .flatten()
        .reduce(
            || (1, 0), // the uncut tree (mask 0) is always a valid baseline
            |a, b| {
                if a.0 != b.0 {
                    if a.0 > b.0 {
                        a
                    } else {
                        b
                    }
                } else if a.1 <= b.1 {
                    a
                } else {
                    b
                }
            },
        );

    let mut comp = vec![0usize; n];
    eval.components(tree, best.1, &mut comp);
    Ok((best.0, Coloring::from_class_ids(&comp)))
}

/// Maximum quorum class count of an arbitrary graph by exhaustive set
/// partition search (restricted growth strings, lexicographic order).
///
/// Errors with `TooLarge` when `n > limit`; returns 0 for the empty graph.
pub fn brute_force_graph(graph: &Graph, limit: usize) -> Result<usize, OracleError> {
    let n = graph.vertex_count();
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    if n == 0 {
        return Ok(0);
    }
    let need: Vec<usize> = (0..n).map(|v| quorum_requirement(graph.degree(v))).collect();
    let valid = |a: &[usize]| {
        (0..n).all(|v| {
            let same =
                1 + graph.neighbors(v).iter().filter(|&&u| a[u] == a[v]).count();
            same >= need[v]
        })
    };

    // Restricted growth: a[0] = 0 and a[i] ≤ max(a[..i]) + 1, visiting every
    // set partition exactly once. prefix_max[i] = max(a[..=i]).
    let mut a = vec![0usize; n];
    let mut prefix_max = vec![0usize; n];
    let mut best = 1usize; // the all-in-one partition is always valid
    loop {
        let k = prefix_max[n - 1] + 1;
        if k > best && valid(&a) {
            best = k;
        }
        // Lexicographic successor.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(best);
            }
            if a[i] <= prefix_max[i - 1] {
                break;
            }
            i -= 1;
        }
        a[i] += 1;
        prefix_max[i] = prefix_max[i - 1].max(a[i]);
        for j in i + 1..n {
            a[j] = 0;
            prefix_max[j] = prefix_max[j - 1];
        }
    }
}
