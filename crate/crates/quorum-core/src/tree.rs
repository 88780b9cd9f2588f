//! Rooted trees with flat (CSR-style) storage.
//!
//! Trees are built from parent arrays and kept in arrays indexed by vertex:
//! no per-vertex allocations, no recursion, so multi-million-vertex paths and
//! deep chains are handled without stack or allocator pressure.

use thiserror::Error;

use crate::coloring::Graph;

/// Errors raised while validating a parent array.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    /// More than one entry is a root marker.
    #[error("multiple roots: vertices {0} and {1} both have no parent")]
    MultipleRoots(usize, usize),
    /// No entry is a root marker (includes the empty array).
    #[error("no root: every vertex has a parent")]
    NoRoot,
    /// Parent pointers contain a cycle, so some vertex is unreachable from the root.
    #[error("cycle detected: {unreachable} vertices are not reachable from root {root}")]
    CycleDetected { root: usize, unreachable: usize },
    /// A parent index is outside `0..n`.
    #[error("vertex {vertex} has parent {parent} out of range for {n} vertices")]
    IndexOutOfRange { vertex: usize, parent: usize, n: usize },
}

/// Structural family of a rooted tree, most specific first.
///
/// `classify_shape` returns the most specific class that applies:
/// `PerfectNary` ⊂ `PerfectPerLevel` ⊂ `LocallyPerfect` ⊂ `PerfectOnly` ⊂ `General`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeClass {
    /// All leaves at depth `height`, every internal vertex has exactly
    /// `n_children` children, `n_children ≥ 2`.
    PerfectNary { n_children: usize, height: usize },
    /// All leaves at depth `h`, every depth-`i` vertex has exactly `counts[i]`
    /// children (`counts.len() == h`; empty for a single vertex).
    PerfectPerLevel { counts: Vec<usize> },
    /// All leaves equidistant and sibling groups share a child count, but
    /// counts differ across groups at the same depth.
    LocallyPerfect,
    /// All leaves equidistant from the root, nothing more.
    PerfectOnly,
    /// None of the above.
    General,
}

impl ShapeClass {
    /// Per-level child counts when the shape determines them, i.e. for
    /// `PerfectNary` and `PerfectPerLevel`.
    pub fn per_level_counts(&self) -> Option<Vec<usize>> {
        match self {
            ShapeClass::PerfectNary { n_children, height } => Some(vec![*n_children; *height]),
            ShapeClass::PerfectPerLevel { counts } => Some(counts.clone()),
            _ => None,
        }
    }
}

const NO_PARENT: usize = usize::MAX;

/// A rooted tree on vertices `0..n`.
///
/// Children lists are stored in one flat array ordered by ascending vertex
/// index, and vertices are additionally indexed level by level (depth-major,
/// ascending index within a level).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    n: usize,
    root: usize,
    /// parent[v], NO_PARENT at the root.
    parent: Vec<usize>,
    /// Concatenated children lists, ascending within each vertex.
    children: Vec<usize>,
    /// children of v are children[child_start[v]..child_start[v + 1]].
    child_start: Vec<usize>,
    depth: Vec<usize>,
    /// Vertices sorted by (depth, index).
    level_order: Vec<usize>,
    /// Level i is level_order[level_start[i]..level_start[i + 1]].
    level_start: Vec<usize>,
    height: usize,
}

impl RootedTree {
    /// Builds a tree from a parent array (`None` marks the root).
    ///
    /// Validates that exactly one root exists, all parent indices are in
    /// range, and every vertex is reachable from the root.
    pub fn from_parent_array(parents: &[Option<usize>]) -> Result<Self, TreeError> {
        let n = parents.len();
        let mut root = None;
        for (v, p) in parents.iter().enumerate() {
            match *p {
                None => match root {
                    None => root = Some(v),
                    Some(r) => return Err(TreeError::MultipleRoots(r, v)),
                },
                Some(p) if p >= n => {
                    return Err(TreeError::IndexOutOfRange { vertex: v, parent: p, n })
                }
                Some(_) => {}
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;

        // CSR children: counting pass, then fill; ascending child order falls
        // out of scanning v in increasing order.
        let mut child_start = vec![0usize; n + 1];
        for p in parents.iter().flatten() {
            child_start[p + 1] += 1;
        }
        for i in 0..n {
            child_start[i + 1] += child_start[i];
        }
        let mut cursor = child_start.clone();
        let mut children = vec![0usize; n - 1];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                children[cursor[p]] = v;
                cursor[p] += 1;
            }
        }

        // BFS from the root assigns depths and proves every vertex reachable.
        let mut depth = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::with_capacity(n);
        depth[root] = 0;
        queue.push_back(root);
        let mut visited = 0usize;
        let mut height = 0usize;
        while let Some(v) = queue.pop_front() {
            visited += 1;
            height = height.max(depth[v]);
            for &c in &children[child_start[v]..child_start[v + 1]] {
                if depth[c] != usize::MAX {
                    // A repeated child means its parent pointer participates
                    // in a cycle through the root's component; unreachable
                    // accounting below reports it uniformly.
                    continue;
                }
                depth[c] = depth[v] + 1;
                queue.push_back(c);
            }
        }
        if visited < n {
            return Err(TreeError::CycleDetected { root, unreachable: n - visited });
        }

        // Counting sort by depth keeps each level ascending by vertex index.
        let mut level_start = vec![0usize; height + 2];
        for &d in &depth {
            level_start[d + 1] += 1;
        }
        for i in 0..=height {
            level_start[i + 1] += level_start[i];
        }
        let mut level_cursor = level_start.clone();
        let mut level_order = vec![0usize; n];
        for (v, &d) in depth.iter().enumerate() {
            level_order[level_cursor[d]] = v;
            level_cursor[d] += 1;
        }

        let parent = parents.iter().map(|p| p.unwrap_or(NO_PARENT)).collect();
        Ok(RootedTree {
            n,
            root,
            parent,
            children,
            child_start,
            depth,
            level_order,
            level_start,
            height,
        })
    }

    /// Number of vertices (always ≥ 1).
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = self.parent[v];
        (p != NO_PARENT).then_some(p)
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[self.child_start[v]..self.child_start[v + 1]]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Largest depth of any vertex; a single vertex has height 0.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Vertices at depth `i`, ascending by index. Panics if `i > height`.
    pub fn level(&self, i: usize) -> &[usize] {
        &self.level_order[self.level_start[i]..self.level_start[i + 1]]
    }

    /// Undirected degree: child count plus one unless `v` is the root.
    pub fn degree(&self, v: usize) -> usize {
        self.children(v).len() + usize::from(self.parent[v] != NO_PARENT)
    }

    /// Maximum undirected degree over all vertices.
    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// The parent array this tree was built from.
    pub fn parent_array(&self) -> Vec<Option<usize>> {
        (0..self.n).map(|v| self.parent(v)).collect()
    }

    /// Undirected view of the tree edges.
    pub fn to_graph(&self) -> Graph {
        let edges: Vec<(usize, usize)> =
            (0..self.n).filter_map(|v| self.parent(v).map(|p| (p, v))).collect();
        Graph::from_edges(self.n, &edges)
    }

    /// Most specific structural family this tree belongs to.
    ///
    /// Leaves here are childless vertices; "equidistant" means they all sit at
    /// depth `height()`. A path classifies as `PerfectPerLevel` with all-ones
    /// counts and a single vertex as `PerfectPerLevel` with empty counts:
    /// `PerfectNary` is reserved for branching factor ≥ 2.
    pub fn classify_shape(&self) -> ShapeClass {
        let equidistant =
            (0..self.n).all(|v| !self.children(v).is_empty() || self.depth[v] == self.height);
        if !equidistant {
            return ShapeClass::General;
        }

        let mut counts = Vec::with_capacity(self.height);
        let mut per_level = true;
        for i in 0..self.height {
            let level = self.level(i);
            let c0 = self.children(level[0]).len();
            if level.iter().all(|&v| self.children(v).len() == c0) {
                counts.push(c0);
            } else {
                per_level = false;
                break;
            }
        }
        if per_level {
            if !counts.is_empty() && counts[0] >= 2 && counts.iter().all(|&c| c == counts[0]) {
                return ShapeClass::PerfectNary { n_children: counts[0], height: self.height };
            }
            return ShapeClass::PerfectPerLevel { counts };
        }

        // Locally perfect: within every sibling group the child counts agree.
        let locally = (0..self.n).all(|v| {
            let ch = self.children(v);
            ch.windows(2).all(|w| self.children(w[0]).len() == self.children(w[1]).len())
        });
        if locally {
            ShapeClass::LocallyPerfect
        } else {
            ShapeClass::PerfectOnly
        }
    }

    /// Subgraph induced by the internal vertices (undirected degree ≥ 2),
    /// plus the map from new indices back to original vertex indices.
    ///
    /// For a tree this is always a forest. A single vertex or a single edge
    /// yields the empty graph.
    pub fn internal_forest(&self) -> (Graph, Vec<usize>) {
        let mut to_new = vec![usize::MAX; self.n];
        let mut to_old = Vec::new();
        for (v, slot) in to_new.iter_mut().enumerate() {
            if self.degree(v) >= 2 {
                *slot = to_old.len();
                to_old.push(v);
            }
        }
        let mut edges = Vec::new();
        for &v in &to_old {
            for &c in self.children(v) {
                if to_new[c] != usize::MAX {
                    edges.push((to_new[v], to_new[c]));
                }
            }
        }
        (Graph::from_edges(to_old.len(), &edges), to_old)
    }
}
