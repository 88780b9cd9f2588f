//! Quorum colorings and their validators.
//!
//! A quorum coloring is a partition of the vertices such that every vertex
//! has at least ⌈|N[v]|/2⌉ members of its own class inside its closed
//! neighborhood N[v]: each class defends every one of its members with at
//! least half of that member's closed neighborhood.

use serde::Serialize;
use thiserror::Error;

/// Errors raised by coloring validators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    /// The coloring's length differs from the graph's vertex count.
    #[error("coloring covers {got} vertices but the graph has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    /// The coloring fails the quorum condition at the listed vertices.
    #[error("not a quorum coloring: {} violating vertices", violations.len())]
    NotAQuorumColoring { violations: Vec<usize> },
}

/// An undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from undirected edges.
    ///
    /// Panics on self-loops, duplicate edges, or out-of-range endpoints;
    /// callers construct edge lists, so these are programming errors rather
    /// than recoverable conditions.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} vertices");
            assert_ne!(u, v, "self-loop at {u}");
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (v, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            assert!(list.windows(2).all(|w| w[0] != w[1]), "duplicate edge at vertex {v}");
        }
        Graph { adjacency, edge_count: edges.len() }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Each edge once, as (min, max) pairs ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Disjoint union: vertices of `other` are shifted past `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count();
        let mut edges = self.edges();
        edges.extend(other.edges().into_iter().map(|(u, v)| (u + shift, v + shift)));
        Graph::from_edges(shift + other.vertex_count(), &edges)
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges)
    }
}

/// A partition of `0..n` into classes `0..k`, every class non-empty.
///
/// Class identifiers are canonical: relabeled to first-appearance order at
/// construction, so two colorings that differ only by renaming classes
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    class_of: Vec<usize>,
    k: usize,
}

impl Coloring {
    /// Builds a coloring from arbitrary class labels, relabeling them to
    /// first-appearance order (vertex 0's class becomes 0, the next distinct
    /// label becomes 1, and so on).
    pub fn from_class_ids(labels: &[usize]) -> Self {
        // Dense labels (the common case) get a direct lookup table; sparse
        // ones fall back to a hash map.
        let max_label = labels.iter().copied().max().unwrap_or(0);
        let mut k = 0usize;
        let mut class_of = Vec::with_capacity(labels.len());
        if max_label < labels.len().saturating_mul(4) {
            const UNSEEN: usize = usize::MAX;
            let mut seen = vec![UNSEEN; max_label + 1];
            for &label in labels {
                if seen[label] == UNSEEN {
                    seen[label] = k;
                    k += 1;
                }
                class_of.push(seen[label]);
            }
        } else {
            let mut seen: std::collections::HashMap<usize, usize> =
                std::collections::HashMap::new();
            for &label in labels {
                let next = k;
                let id = *seen.entry(label).or_insert(next);
                if id == next {
                    k += 1;
                }
                class_of.push(id);
            }
        }
        Coloring { class_of, k }
    }

    /// All vertices in one class.
    pub fn monochromatic(n: usize) -> Self {
        assert!(n > 0, "empty vertex set");
        Coloring { class_of: vec![0; n], k: 1 }
    }

    /// Each vertex its own class.
    pub fn singletons(n: usize) -> Self {
        assert!(n > 0, "empty vertex set");
        Coloring { class_of: (0..n).collect(), k: n }
    }

    pub fn vertex_count(&self) -> usize {
        self.class_of.len()
    }

    /// Number of classes.
    pub fn class_count(&self) -> usize {
        self.k
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn class_ids(&self) -> &[usize] {
        &self.class_of
    }

    /// Members of every class, each list ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.class_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Quorum data for one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexQuorum {
    /// |N[v]| = degree + 1.
    pub closed_size: usize,
    /// |N[v] ∩ class(v)|, self included.
    pub same_count: usize,
    /// same_count ≥ ⌈closed_size/2⌉.
    pub satisfied: bool,
    /// same_count == ⌈closed_size/2⌉ exactly.
    pub tight: bool,
}

/// Result of checking the quorum condition at every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuorumReport {
    pub per_vertex: Vec<VertexQuorum>,
    pub valid: bool,
    /// Vertices with same_count below the requirement, ascending.
    pub violations: Vec<usize>,
}

/// Smallest same-class count that satisfies a vertex of the given degree:
/// ⌈(degree + 1)/2⌉.
pub fn quorum_requirement(degree: usize) -> usize {
    degree / 2 + 1
}

/// Checks the quorum condition |N[v] ∩ class(v)| ≥ ⌈|N[v]|/2⌉ at every vertex.
pub fn verify_quorum(graph: &Graph, coloring: &Coloring) -> Result<QuorumReport, ColoringError> {
    let n = graph.vertex_count();
    if coloring.vertex_count() != n {
        return Err(ColoringError::SizeMismatch { expected: n, got: coloring.vertex_count() });
    }
    let mut per_vertex = Vec::with_capacity(n);
    let mut violations = Vec::new();
    for v in 0..n {
        let me = coloring.class_of(v);
        let same_count =
            1 + graph.neighbors(v).iter().filter(|&&u| coloring.class_of(u) == me).count();
        let closed_size = graph.degree(v) + 1;
        let need = quorum_requirement(graph.degree(v));
        let satisfied = same_count >= need;
        if !satisfied {
            violations.push(v);
        }
        per_vertex.push(VertexQuorum { closed_size, same_count, satisfied, tight: same_count == need });
    }
    Ok(QuorumReport { valid: violations.is_empty(), per_vertex, violations })
}

/// Whether a valid quorum coloring is tight at every internal vertex.
///
/// Internal means undirected degree ≥ 2; vertices of degree ≤ 1 are exempt
/// (a single vertex or a degree-1 endpoint is already as tight as it can be).
/// Returns `NotAQuorumColoring` when the input is not valid to begin with.
pub fn is_cost_effective(graph: &Graph, coloring: &Coloring) -> Result<bool, ColoringError> {
    let report = verify_quorum(graph, coloring)?;
    if !report.valid {
        return Err(ColoringError::NotAQuorumColoring { violations: report.violations });
    }
    Ok((0..graph.vertex_count()).all(|v| graph.degree(v) <= 1 || report.per_vertex[v].tight))
}

/// Whether each class induces a connected subgraph; indexed by class id.
///
/// Panics if the coloring's length differs from the graph's vertex count.
pub fn check_class_connectivity(graph: &Graph, coloring: &Coloring) -> Vec<bool> {
    let n = graph.vertex_count();
    assert_eq!(coloring.vertex_count(), n, "coloring does not cover the graph");
    let classes = coloring.classes();
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    classes
        .iter()
        .enumerate()
        .map(|(c, members)| {
            stack.clear();
            stack.push(members[0]);
            seen[members[0]] = true;
            let mut reached = 0usize;
            while let Some(v) = stack.pop() {
                reached += 1;
                for &u in graph.neighbors(v) {
                    if coloring.class_of(u) == c && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            reached == members.len()
        })
        .collect()
}

/// A structural bound violated by a (claimed) quorum coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ClassSizeViolation {
    /// Class `class` holds `vertex` of degree `degree` but has fewer than
    /// ⌊degree/2⌋ + 1 members.
    ClassTooSmall { class: usize, vertex: usize, degree: usize, size: usize, required: usize },
    /// A singleton class contains a vertex of degree ≥ 2.
    SingletonHighDegree { class: usize, vertex: usize, degree: usize },
}

/// Checks the structural class-size bounds every valid quorum coloring obeys:
/// each class containing a vertex of degree d has at least ⌊d/2⌋ + 1 members,
/// and singleton classes hold only vertices of degree ≤ 1.
///
/// Returns `NotAQuorumColoring` for invalid input; for valid input the
/// returned list is provably empty, so a non-empty result from a passing
/// `verify_quorum` would expose an internal inconsistency.
pub fn check_class_size_bounds(
    graph: &Graph,
    coloring: &Coloring,
) -> Result<Vec<ClassSizeViolation>, ColoringError> {
    let report = verify_quorum(graph, coloring)?;
    if !report.valid {
        return Err(ColoringError::NotAQuorumColoring { violations: report.violations });
    }
    let mut out = Vec::new();
    let classes = coloring.classes();
    for (c, members) in classes.iter().enumerate() {
        for &v in members {
            let d = graph.degree(v);
            let required = d / 2 + 1;
            if members.len() < required {
                out.push(ClassSizeViolation::ClassTooSmall {
                    class: c,
                    vertex: v,
                    degree: d,
                    size: members.len(),
                    required,
                });
            }
            if members.len() == 1 && d >= 2 {
                out.push(ClassSizeViolation::SingletonHighDegree { class: c, vertex: v, degree: d });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn canonicalizes_class_labels() {
        let a = Coloring::from_class_ids(&[7, 7, 3, 7, 3, 9]);
        let b = Coloring::from_class_ids(&[0, 0, 1, 0, 1, 2]);
        assert_eq!(a, b);
        assert_eq!(a.class_count(), 3);
        assert_eq!(a.classes(), vec![vec![0, 1, 3], vec![2, 4], vec![5]]);
    }

    #[test]
    fn quorum_requirement_is_half_closed_neighborhood() {
        // degree d: requirement ⌈(d + 1)/2⌉.
        for (d, need) in [(0, 1), (1, 1), (2, 2), (3, 2), (4, 3), (5, 3)] {
            assert_eq!(quorum_requirement(d), need);
        }
    }

    #[test]
    fn p3_middle_vertex_needs_company() {
        let g = path_graph(3);
        // Singletons: the middle vertex has 1 < 2.
        let report = verify_quorum(&g, &Coloring::singletons(3)).unwrap();
        assert!(!report.valid);
        assert_eq!(report.violations, vec![1]);
        assert_eq!(report.per_vertex[1].same_count, 1);
        assert_eq!(report.per_vertex[1].closed_size, 3);

        // {0,1},{2} is valid and tight in the middle.
        let c = Coloring::from_class_ids(&[0, 0, 1]);
        let report = verify_quorum(&g, &c).unwrap();
        assert!(report.valid);
        assert!(report.per_vertex[1].tight);
        assert!(is_cost_effective(&g, &c).unwrap());

        // Monochromatic is valid but slack in the middle.
        let mono = Coloring::monochromatic(3);
        assert!(verify_quorum(&g, &mono).unwrap().valid);
        assert!(!is_cost_effective(&g, &mono).unwrap());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let g = path_graph(3);
        let c = Coloring::monochromatic(2);
        assert_eq!(
            verify_quorum(&g, &c),
            Err(ColoringError::SizeMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn cost_effective_rejects_invalid_input() {
        let g = path_graph(3);
        let err = is_cost_effective(&g, &Coloring::singletons(3)).unwrap_err();
        assert_eq!(err, ColoringError::NotAQuorumColoring { violations: vec![1] });
    }

    #[test]
    fn connectivity_flags_split_classes() {
        let g = path_graph(4);
        // {0,3} is disconnected, {1,2} is connected.
        let c = Coloring::from_class_ids(&[0, 1, 1, 0]);
        assert_eq!(check_class_connectivity(&g, &c), vec![false, true]);
        assert_eq!(check_class_connectivity(&g, &Coloring::monochromatic(4)), vec![true]);
    }

    #[test]
    fn class_size_bounds_hold_on_valid_colorings() {
        let g = path_graph(5);
        let c = Coloring::from_class_ids(&[0, 0, 1, 1, 1]);
        assert!(verify_quorum(&g, &c).unwrap().valid);
        assert_eq!(check_class_size_bounds(&g, &c).unwrap(), vec![]);

        let err = check_class_size_bounds(&g, &Coloring::singletons(5)).unwrap_err();
        assert!(matches!(err, ColoringError::NotAQuorumColoring { .. }));
    }

    #[test]
    fn complete_graph_helpers() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.vertex_count(), 4);
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.max_degree(), 3);
        let u = k4.disjoint_union(&Graph::complete(3));
        assert_eq!(u.vertex_count(), 7);
        assert_eq!(u.edge_count(), 9);
        assert_eq!(u.neighbors(4), &[5, 6]);
    }

    #[test]
    fn edges_listed_once_ascending() {
        let g = path_graph(4);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3)]);
    }
}
