//! Refinement of quorum colorings on trees.
//!
//! Sweeps the tree top-down. Whenever a vertex v holds more same-class closed
//! neighbors than the required ⌈|N[v]|/2⌉, the surplus is shed by moving that
//! many of v's lowest-index same-class children into fresh classes, each
//! taking along every descendant that still carries v's color. A moved child
//! u loses v from its class and can end up exactly one neighbor short; the
//! repair pulls u's lowest-index child w of a different class into u's class,
//! together with every descendant of w still colored like w. Both moves split
//! whole subtree chunks off existing classes, so no other vertex's same-class
//! count changes and validity is preserved while the class count only grows.
//!
//! Worst case O(n²) on adversarial colorings (chunk drags can rescan
//! subtrees); linear in practice for connected classes.

use serde::Serialize;
use thiserror::Error;

use crate::coloring::{verify_quorum, Coloring};
use crate::tree::RootedTree;

/// One vertex where the surplus rule fired.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefineStep {
    pub vertex: usize,
    pub depth: usize,
    /// Children moved into fresh classes, ascending index.
    pub surplus_set: Vec<usize>,
    /// (deficient moved child, child pulled into its class) pairs.
    pub repairs: Vec<(usize, usize)>,
    pub classes_before: usize,
    pub classes_after: usize,
}

/// Full record of a refinement run; `steps` lists only vertices that fired.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefineTrace {
    pub initial_classes: usize,
    pub final_classes: usize,
    pub steps: Vec<RefineStep>,
}

/// Errors from refinement.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefineError {
    /// The input fails the quorum condition at the listed vertices.
    #[error("input is not a quorum coloring: {} violating vertices", violations.len())]
    NotAQuorumColoring { violations: Vec<usize> },
    /// An internal guarantee failed; carries the trace gathered so far.
    /// Reaching this would mean the refinement argument itself is broken.
    #[error("internal invariant violation: {context}")]
    InternalInvariantViolation { context: String, trace: Box<RefineTrace> },
}

/// Moves `vertex` and every descendant currently colored `from` into `to`,
/// scanning the whole subtree (classes need not be connected). Updates class
/// sizes and drops the live-class count when `from` empties.
fn drag_chunk(
    tree: &RootedTree,
    class: &mut [usize],
    sizes: &mut [usize],
    live: &mut usize,
    vertex: usize,
    from: usize,
    to: usize,
) {
    let mut stack = vec![vertex];
    while let Some(x) = stack.pop() {
        if class[x] == from {
            class[x] = to;
            sizes[from] -= 1;
            sizes[to] += 1;
        }
        stack.extend_from_slice(tree.children(x));
    }
    if sizes[from] == 0 {
        *live -= 1;
    }
}

/// Refines a valid quorum coloring of a tree into a cost-effective one with
/// at least as many classes.
///
/// On perfect per-level trees the result reaches the maximum class count
/// regardless of the starting coloring. Inputs whose classes are already
/// surplus-free everywhere come back unchanged.
///
/// In debug builds validity is re-verified after every processed vertex; in
/// release builds once at the end. Panics if the coloring's length differs
/// from the tree's vertex count.
pub fn refine_coloring(
    tree: &RootedTree,
    coloring: &Coloring,
) -> Result<(Coloring, RefineTrace), RefineError> {
    let n = tree.vertex_count();
    assert_eq!(coloring.vertex_count(), n, "coloring does not cover the tree");
    let graph = tree.to_graph();
    let report = verify_quorum(&graph, coloring).expect("length checked above");
    if !report.valid {
        return Err(RefineError::NotAQuorumColoring { violations: report.violations });
    }

    let k0 = coloring.class_count();
    let mut class: Vec<usize> = coloring.class_ids().to_vec();
    // Capacity for every fresh class any run can open: one per vertex.
    let mut sizes = vec![0usize; k0 + n];
    for &c in &class {
        sizes[c] += 1;
    }
    let mut next = k0;
    let mut live = k0;
    let mut steps: Vec<RefineStep> = Vec::new();

    macro_rules! invariant_violation {
        ($ctx:expr) => {
            return Err(RefineError::InternalInvariantViolation {
                context: $ctx,
                trace: Box::new(RefineTrace {
                    initial_classes: k0,
                    final_classes: live,
                    steps: std::mem::take(&mut steps),
                }),
            })
        };
    }

    for depth in 0..tree.height() {
        for &v in tree.level(depth) {
            let kids = tree.children(v);
            if kids.is_empty() {
                continue;
            }
            let me = class[v];
            let need = tree.degree(v) / 2 + 1;
            let same = 1
                + kids.iter().filter(|&&c| class[c] == me).count()
                + tree.parent(v).map_or(0, |p| usize::from(class[p] == me));
            if same <= need {
                continue;
            }

            let surplus = same - need;
            let classes_before = live;
            let surplus_set: Vec<usize> =
                kids.iter().copied().filter(|&c| class[c] == me).take(surplus).collect();
            if surplus_set.len() < surplus {
                invariant_violation!(format!(
                    "vertex {v} has surplus {surplus} but only {} same-class children",
                    surplus_set.len()
                ));
            }

            for &u in &surplus_set {
                let fresh = next;
                next += 1;
                live += 1;
                drag_chunk(tree, &mut class, &mut sizes, &mut live, u, me, fresh);
            }

            let mut repairs = Vec::new();
            for &u in &surplus_set {
                let cu = class[u];
                let need_u = tree.degree(u) / 2 + 1;
                // v kept its color, so u's same-class neighbors are children.
                let same_u = 1 + tree.children(u).iter().filter(|&&c| class[c] == cu).count();
                if same_u >= need_u {
                    continue;
                }
                if same_u + 1 != need_u {
                    invariant_violation!(format!(
                        "moved child {u} is {} below its requirement, expected exactly 1",
                        need_u - same_u
                    ));
                }
                let Some(w) = tree.children(u).iter().copied().find(|&w| class[w] != cu) else {
                    invariant_violation!(format!(
                        "moved child {u} is deficient but has no out-of-class child"
                    ));
                };
                let old = class[w];
                drag_chunk(tree, &mut class, &mut sizes, &mut live, w, old, cu);
                repairs.push((u, w));
            }

            steps.push(RefineStep {
                vertex: v,
                depth,
                surplus_set,
                repairs,
                classes_before,
                classes_after: live,
            });

            #[cfg(debug_assertions)]
            {
                let check = verify_quorum(&graph, &Coloring::from_class_ids(&class)).unwrap();
                if !check.valid {
                    invariant_violation!(format!(
                        "validity lost after processing vertex {v}: violations {:?}",
                        check.violations
                    ));
                }
            }
        }
    }

    let out = Coloring::from_class_ids(&class);
    debug_assert_eq!(out.class_count(), live);
    let final_report = verify_quorum(&graph, &out).expect("same length");
    if !final_report.valid {
        invariant_violation!(format!(
            "final coloring invalid: violations {:?}",
            final_report.violations
        ));
    }
    let trace = RefineTrace { initial_classes: k0, final_classes: live, steps };
    Ok((out, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_cost_effective;
    use crate::generators::{gen_perfect_per_level, gen_random_tree};
    use crate::algorithms::solver::{alpha_closed, solve_per_level};

    #[test]
    fn rejects_invalid_input() {
        let t = gen_perfect_per_level(&[1, 1]).unwrap();
        let err = refine_coloring(&t, &Coloring::singletons(3)).unwrap_err();
        assert_eq!(err, RefineError::NotAQuorumColoring { violations: vec![1] });
    }

    #[test]
    fn splits_monochromatic_path() {
        let t = gen_perfect_per_level(&[1, 1]).unwrap();
        let (c, trace) = refine_coloring(&t, &Coloring::monochromatic(3)).unwrap();
        assert_eq!(c.class_ids(), &[0, 1, 1]);
        assert_eq!(trace.initial_classes, 1);
        assert_eq!(trace.final_classes, 2);
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].vertex, 0);
        assert_eq!(trace.steps[0].surplus_set, vec![1]);
        assert!(trace.steps[0].repairs.is_empty());
    }

    #[test]
    fn splits_single_edge() {
        // Two mutual leaves, still processed through the root: ψ_q(K₂) = 2.
        let t = gen_perfect_per_level(&[1]).unwrap();
        let (c, _) = refine_coloring(&t, &Coloring::monochromatic(2)).unwrap();
        assert_eq!(c.class_count(), 2);
    }

    #[test]
    fn surplus_free_input_is_returned_unchanged() {
        let t = gen_perfect_per_level(&[3, 4, 1]).unwrap();
        let (solved, _) = solve_per_level(&t).unwrap();
        let (refined, trace) = refine_coloring(&t, &solved).unwrap();
        assert_eq!(refined, solved);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.final_classes, trace.initial_classes);
    }

    #[test]
    fn repair_pulls_a_grandchild_along_with_its_chunk() {
        // Root 0 — vertex 1 — {2, 3}; children of 2: 4..=7; of 3: 8..=11.
        // Classes {0,1}, {2,4,5,6,7}, {3,8,9,10,11}: vertex 1 has surplus 1,
        // moving it strands it one short; the repair pulls child 2's whole
        // class into vertex 1's fresh class.
        let t = gen_perfect_per_level(&[1, 2, 4]).unwrap();
        let ids = [0, 0, 1, 2, 1, 1, 1, 1, 2, 2, 2, 2];
        let input = Coloring::from_class_ids(&ids);
        let (c, trace) = refine_coloring(&t, &input).unwrap();
        assert_eq!(trace.steps[0].vertex, 0);
        assert_eq!(trace.steps[0].surplus_set, vec![1]);
        assert_eq!(trace.steps[0].repairs, vec![(1, 2)]);
        // The repair put {1, 2, 4, 5, 6, 7} into one class; the sweep then
        // splits vertex 2's new surplus, leaving {1, 2, 7} together.
        let one = c.class_of(1);
        assert_eq!(c.class_of(2), one);
        assert_eq!(c.class_of(7), one);
        assert_ne!(c.class_of(4), one);
        assert!(is_cost_effective(&t.to_graph(), &c).unwrap());
        assert_eq!(c.class_count(), alpha_closed(&[1, 2, 4]));
    }

    #[test]
    fn worked_example_figure_coloring_reaches_fifteen() {
        let t = gen_perfect_per_level(&[3, 4, 1]).unwrap();
        let ids = [
            0, 0, 0, 0, 0, 1, 2, 3, 0, 0, 4, 5, 0, 0, 0, 6, 0, 1, 2, 3, 0, 7, 4, 5, 8, 9, 0, 6,
        ];
        let input = Coloring::from_class_ids(&ids);
        assert_eq!(input.class_count(), 10);
        let (c, trace) = refine_coloring(&t, &input).unwrap();
        assert_eq!(c.class_count(), 15);
        assert_eq!(trace.final_classes, 15);
        assert!(is_cost_effective(&t.to_graph(), &c).unwrap());
    }

    #[test]
    fn refinement_is_idempotent() {
        for seed in 0..20u64 {
            let t = gen_random_tree(2 + (seed as usize * 5) % 13, seed).unwrap();
            let (once, _) = refine_coloring(&t, &Coloring::monochromatic(t.vertex_count())).unwrap();
            let (twice, trace) = refine_coloring(&t, &once).unwrap();
            assert_eq!(twice, once);
            assert!(trace.steps.is_empty());
        }
    }

    #[test]
    fn per_level_refinement_always_reaches_alpha() {
        // Whatever valid coloring it starts from, on per-level trees the
        // result has exactly the solver's class count.
        for counts in [vec![2, 2], vec![3, 4, 1], vec![1, 2, 4], vec![4, 1], vec![2, 1, 2]] {
            let t = gen_perfect_per_level(&counts).unwrap();
            let n = t.vertex_count();
            let (c, _) = refine_coloring(&t, &Coloring::monochromatic(n)).unwrap();
            assert_eq!(c.class_count(), alpha_closed(&counts), "counts {counts:?}");
        }
    }
}
