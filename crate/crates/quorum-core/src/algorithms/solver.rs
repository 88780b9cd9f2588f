//! Linear-time construction of maximum quorum colorings on perfect per-level
//! trees.
//!
//! The solver walks the tree level by level. The root opens the first class
//! and hands its color to the last ⌊N₀/2⌋ of its children while the first
//! ⌈N₀/2⌉ children open fresh classes. Every deeper internal vertex v with
//! N children passes its own color to a prefix of its children and opens
//! fresh classes for the rest:
//!
//! * v shares its parent's color: keep ⌈N/2⌉ − 1, open ⌊N/2⌋ + 1;
//! * v differs from its parent: keep ⌈N/2⌉, open ⌊N/2⌋.
//!
//! Both cases leave v with exactly ⌈|N[v]|/2⌉ same-class closed neighbors,
//! so the result is tight at every internal vertex, and the number of classes
//! opened is the largest any quorum coloring can reach.

use serde::Serialize;
use thiserror::Error;

use crate::coloring::Coloring;
use crate::tree::RootedTree;

/// Errors from the per-level solver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    /// The tree is not perfect per-level, so the level recurrence does not apply.
    #[error("tree is not perfect per-level; use refinement or brute force instead")]
    NotPerLevel,
    /// A tree with no vertices. Unreachable through the validated
    /// constructors, kept so the API states its domain completely.
    #[error("tree has no vertices")]
    EmptyTree,
}

/// Counts of the four operation categories the solver performs.
///
/// One comparison per non-root internal vertex (does it share its parent's
/// color?), one color assignment per vertex, two arithmetic updates plus one
/// running-sum addition per internal vertex. The grand total stays below 5n.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    pub comparisons: u64,
    pub color_assignments: u64,
    pub alpha_updates: u64,
    pub sum_additions: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.comparisons + self.color_assignments + self.alpha_updates + self.sum_additions
    }
}

/// Per-vertex accounting of how many classes each internal vertex opened.
///
/// `values_at_level(i)` lists, for each depth-i internal vertex in ascending
/// index order, the number of classes opened while coloring its children
/// (the root's entry also counts its own class). The total over all levels is
/// `alpha()`, the number of classes of the final coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaTrace {
    alpha: usize,
    /// Flat per-internal-vertex values, level-major, ascending index inside
    /// each level.
    values: Vec<usize>,
    /// Level i occupies values[level_offsets[i]..level_offsets[i + 1]].
    level_offsets: Vec<usize>,
    /// Entry i: how many depth-i vertices share their parent's color
    /// (entry 0 is 0 for the root). Obeys shared[1] = ⌊N₀/2⌋ and
    /// shared[i+1] = ℓᵢ⌈Nᵢ/2⌉ − shared[i].
    shared_per_level: Vec<usize>,
    ops: OpCounts,
}

impl AlphaTrace {
    /// Total number of classes of the coloring.
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// Number of internal levels (the tree height).
    pub fn level_count(&self) -> usize {
        self.level_offsets.len() - 1
    }

    /// Classes opened by each depth-`i` vertex, ascending vertex index.
    pub fn values_at_level(&self, i: usize) -> &[usize] {
        &self.values[self.level_offsets[i]..self.level_offsets[i + 1]]
    }

    /// Per-depth counts of vertices sharing their parent's color.
    pub fn shared_per_level(&self) -> &[usize] {
        &self.shared_per_level
    }

    pub fn ops(&self) -> &OpCounts {
        &self.ops
    }
}

/// Colors a perfect per-level tree with the maximum number of classes.
///
/// Returns the coloring (canonical labels) and the per-vertex trace; the
/// class count equals `alpha()`. Runs in one pass over the vertices after
/// shape classification, with no recursion, so multi-million-vertex trees
/// are fine. Errors with `NotPerLevel` on any other shape.
pub fn solve_per_level(tree: &RootedTree) -> Result<(Coloring, AlphaTrace), SolveError> {
    let counts = tree.classify_shape().per_level_counts().ok_or(SolveError::NotPerLevel)?;
    let n = tree.vertex_count();
    let h = tree.height();
    let mut ops = OpCounts::default();

    let mut color = vec![usize::MAX; n];
    color[tree.root()] = 0;
    ops.color_assignments += 1;
    let mut next_color = 1usize;

    let internal = n - tree.level(h).len();
    let mut values: Vec<usize> = Vec::with_capacity(internal);
    let mut level_offsets = vec![0usize];
    let mut shared_per_level = vec![0usize; h + 1];
    let mut alpha = 0usize;

    if h == 0 {
        // Single vertex: one class, no children to account for.
        let trace =
            AlphaTrace { alpha: 1, values, level_offsets, shared_per_level, ops };
        return Ok((Coloring::from_class_ids(&color), trace));
    }

    // Root: fresh classes first, the root's own class to the tail.
    let n0 = counts[0];
    let fresh = n0.div_ceil(2);
    for (idx, &c) in tree.children(tree.root()).iter().enumerate() {
        if idx < fresh {
            color[c] = next_color;
            next_color += 1;
        } else {
            color[c] = 0;
        }
        ops.color_assignments += 1;
    }
    shared_per_level[1] = n0 - fresh;
    ops.alpha_updates += 2;
    values.push(fresh + 1);
    alpha += fresh + 1;
    ops.sum_additions += 1;
    level_offsets.push(values.len());

    // Deeper internal levels: own color to a prefix of the children.
    for i in 1..h {
        let ni = counts[i];
        for &v in tree.level(i) {
            ops.comparisons += 1;
            let parent = tree.parent(v).expect("non-root vertex");
            let shares = color[v] == color[parent];
            ops.alpha_updates += 2;
            let keep = if shares { ni.div_ceil(2) - 1 } else { ni.div_ceil(2) };
            let opened = ni - keep;
            for (idx, &c) in tree.children(v).iter().enumerate() {
                if idx < keep {
                    color[c] = color[v];
                } else {
                    color[c] = next_color;
                    next_color += 1;
                }
                ops.color_assignments += 1;
            }
            shared_per_level[i + 1] += keep;
            values.push(opened);
            alpha += opened;
            ops.sum_additions += 1;
        }
        level_offsets.push(values.len());
    }

    debug_assert_eq!(alpha, next_color);
    let coloring = Coloring::from_class_ids(&color);
    debug_assert_eq!(coloring.class_count(), alpha);
    Ok((coloring, AlphaTrace { alpha, values, level_offsets, shared_per_level, ops }))
}

/// Class count the solver reaches on a perfect per-level tree with the given
/// child counts, computed from the level recurrence alone.
///
/// With ℓᵢ vertices at depth i of which sᵢ share their parent's color:
/// the root level contributes ⌈N₀/2⌉ + 1 classes with s₁ = ⌊N₀/2⌋; level i+1
/// adds ℓᵢ⌊Nᵢ/2⌋ + sᵢ classes and has s_{i+1} = ℓᵢ⌈Nᵢ/2⌉ − sᵢ sharers.
/// Uses 128-bit arithmetic internally and panics if the result cannot fit in
/// `usize`; empty counts mean a single vertex and give 1.
pub fn alpha_closed(counts: &[usize]) -> usize {
    assert!(counts.iter().all(|&c| c >= 1), "level child counts must be ≥ 1");
    if counts.is_empty() {
        return 1;
    }
    let n0 = counts[0] as u128;
    let mut alpha: u128 = n0.div_ceil(2) + 1;
    let mut shared = n0 / 2;
    let mut width = n0;
    for &c in &counts[1..] {
        let c = c as u128;
        alpha = alpha
            .checked_add(width * (c / 2) + shared)
            .expect("class count exceeds 128 bits");
        shared = width * c.div_ceil(2) - shared;
        width = width.checked_mul(c).expect("level width exceeds 128 bits");
    }
    usize::try_from(alpha).expect("class count exceeds usize")
}
