//! Maximum matching on forests.

use serde::Serialize;
use thiserror::Error;

use crate::coloring::Graph;

/// A matching: pairwise-disjoint edges, each as (min, max).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    /// μ, the number of matched edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

/// Errors from the forest matcher.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    /// The graph contains a cycle.
    #[error("graph contains a cycle; this matcher handles forests only")]
    NotAForest,
}

/// Maximum matching of a forest by leaf elimination.
///
/// Repeatedly matches a lowest-index leaf to its unique remaining neighbor
/// and removes both: a leaf edge always belongs to some maximum matching
/// (swap it in for whatever covered the neighbor), so the greedy choice is
/// exact on forests. Runs in O(n + m); errors on cyclic input.
pub fn matching_number_forest(graph: &Graph) -> Result<Matching, MatchingError> {
    let n = graph.vertex_count();

    // A graph is a forest iff m = n − (number of components).
    let mut seen = vec![false; n];
    let mut components = 0usize;
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for &u in graph.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    if graph.edge_count() != n - components {
        return Err(MatchingError::NotAForest);
    }

    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: std::collections::VecDeque<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::new();
    while let Some(u) = queue.pop_front() {
        if !alive[u] || degree[u] != 1 {
            continue;
        }
        let v = *graph
            .neighbors(u)
            .iter()
            .find(|&&w| alive[w])
            .expect("degree-1 vertex has a live neighbor");
        edges.push((u.min(v), u.max(v)));
        alive[u] = false;
        alive[v] = false;
        for &w in graph.neighbors(v) {
            if alive[w] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    // Everything still alive has degree 0 or ≥ 2; a forest without leaves is
    // edgeless, so no matched edge remains.
    Ok(Matching { edges })
}
