//! Deterministic instance generators: per-level trees, uniform random trees,
//! locally perfect trees, and seed colorings.
//!
//! Everything randomized is driven by ChaCha8 seeded from a caller-supplied
//! `u64`, so every instance is reproducible across platforms and runs.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloring::{verify_quorum, Coloring};
use crate::tree::RootedTree;

/// Hard cap on generated tree sizes.
pub const MAX_GENERATED_VERTICES: usize = 10_000_000;

/// Errors from the generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    /// The requested instance would exceed the generation size cap.
    #[error("requested tree exceeds the {cap}-vertex generation cap")]
    SizeOverflow { cap: usize },
    /// Rejection sampling found no valid sample within the attempt budget.
    #[error("no valid coloring found within {attempts} sampling attempts")]
    RetriesExhausted { attempts: usize },
}

/// Perfect per-level tree with `counts[i]` children under every depth-`i`
/// vertex, indexed level-major (breadth-first). Empty counts give the
/// single-vertex tree. Panics if any count is 0; errors when the size
/// exceeds the cap.
pub fn gen_perfect_per_level(counts: &[usize]) -> Result<RootedTree, GenError> {
    assert!(counts.iter().all(|&c| c >= 1), "level child counts must be ≥ 1");
    let mut n: usize = 1;
    let mut width: usize = 1;
    for &c in counts {
        width = width
            .checked_mul(c)
            .filter(|&w| w <= MAX_GENERATED_VERTICES)
            .ok_or(GenError::SizeOverflow { cap: MAX_GENERATED_VERTICES })?;
        n = n
            .checked_add(width)
            .filter(|&m| m <= MAX_GENERATED_VERTICES)
            .ok_or(GenError::SizeOverflow { cap: MAX_GENERATED_VERTICES })?;
    }

    let mut parents: Vec<Option<usize>> = Vec::with_capacity(n);
    parents.push(None);
    let mut start = 0usize; // first index of the level being expanded
    let mut width = 1usize;
    for &c in counts {
        for j in 0..width * c {
            parents.push(Some(start + j / c));
        }
        start += width;
        width *= c;
    }
    Ok(RootedTree::from_parent_array(&parents).expect("per-level parent arrays are valid"))
}

/// Perfect N-ary tree of the given height (N ≥ 1; N = 1 is a path).
pub fn gen_perfect_nary(n_children: usize, height: usize) -> Result<RootedTree, GenError> {
    assert!(n_children >= 1, "branching factor must be ≥ 1");
    gen_perfect_per_level(&vec![n_children; height])
}

/// Uniform random labeled tree on n ≥ 1 vertices, rooted at 0, decoded from
/// a random Prüfer sequence. Same seed, same tree.
pub fn gen_random_tree(n: usize, seed: u64) -> Result<RootedTree, GenError> {
    assert!(n >= 1, "trees have at least one vertex");
    if n > MAX_GENERATED_VERTICES {
        return Err(GenError::SizeOverflow { cap: MAX_GENERATED_VERTICES });
    }
    if n == 1 {
        return Ok(RootedTree::from_parent_array(&[None]).expect("single vertex"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let edges = decode_pruefer(n, &seq);

    // Orient from root 0.
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in &edges {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    let mut parents: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &u in &adjacency[v] {
            if !seen[u] {
                seen[u] = true;
                parents[u] = Some(v);
                queue.push_back(u);
            }
        }
    }
    Ok(RootedTree::from_parent_array(&parents).expect("decoded edges form a tree"))
}

/// Prüfer decoding in O(n): vertex degrees are one more than their
/// multiplicity in the sequence; repeatedly join the smallest-index leaf to
/// the next sequence entry.
fn decode_pruefer(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    debug_assert_eq!(seq.len(), n - 2);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = (0..n).find(|&v| degree[v] == 1).expect("a tree has a leaf");
    let mut leaf = ptr;
    for &s in seq {
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 && s < ptr {
            leaf = s;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

/// Tree of the given height in which every sibling group shares a child
/// count drawn from `choices` (all ≥ 1), so leaves land exactly at `height`.
/// Same seed, same tree; errors when growth exceeds the size cap.
pub fn gen_locally_perfect(
    height: usize,
    choices: &[usize],
    seed: u64,
) -> Result<RootedTree, GenError> {
    assert!(!choices.is_empty(), "need at least one child-count choice");
    assert!(choices.iter().all(|&c| c >= 1), "child-count choices must be ≥ 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| choices[rng.gen_range(0..choices.len())];

    let mut parents: Vec<Option<usize>> = vec![None];
    if height == 0 {
        return Ok(RootedTree::from_parent_array(&parents).expect("single vertex"));
    }
    // Each entry: (vertex, child count it will receive).
    let mut level = vec![(0usize, draw(&mut rng))];
    for depth in 0..height {
        let mut next = Vec::new();
        for &(v, child_count) in &level {
            // One draw per sibling group: all of v's children share it.
            let grandchild_count = if depth + 1 < height { draw(&mut rng) } else { 0 };
            for _ in 0..child_count {
                let w = parents.len();
                if w >= MAX_GENERATED_VERTICES {
                    return Err(GenError::SizeOverflow { cap: MAX_GENERATED_VERTICES });
                }
                parents.push(Some(v));
                next.push((w, grandchild_count));
            }
        }
        level = next;
    }
    Ok(RootedTree::from_parent_array(&parents).expect("constructed parent array is valid"))
}

/// How `gen_seed_coloring` builds its coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedColoringMode {
    /// Everything in one class; always valid.
    Monochromatic,
    /// Random connected classes: each tree edge is cut with probability 1/2
    /// and the resulting components are the classes; invalid samples are
    /// rejected, up to [`SEED_COLORING_ATTEMPTS`] tries.
    RandomConnected,
}

/// Attempt budget of `SeedColoringMode::RandomConnected`.
pub const SEED_COLORING_ATTEMPTS: usize = 64;

/// A valid quorum coloring to seed refinement with; deterministic per seed.
pub fn gen_seed_coloring(
    tree: &RootedTree,
    mode: SeedColoringMode,
    seed: u64,
) -> Result<Coloring, GenError> {
    let n = tree.vertex_count();
    match mode {
        SeedColoringMode::Monochromatic => Ok(Coloring::monochromatic(n)),
        SeedColoringMode::RandomConnected => {
            let graph = tree.to_graph();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut class = vec![0usize; n];
            for _ in 0..SEED_COLORING_ATTEMPTS {
                let mut next = 1usize;
                for d in 1..=tree.height() {
                    for &v in tree.level(d) {
                        let p = tree.parent(v).expect("non-root");
                        if rng.gen_bool(0.5) {
                            class[v] = next;
                            next += 1;
                        } else {
                            class[v] = class[p];
                        }
                    }
                }
                let coloring = Coloring::from_class_ids(&class);
                if verify_quorum(&graph, &coloring).expect("lengths match").valid {
                    return Ok(coloring);
                }
            }
            Err(GenError::RetriesExhausted { attempts: SEED_COLORING_ATTEMPTS })
        }
    }
}

/// A generator request, with a text form for CLIs and reports:
/// `nary:N,h` | `levels:a,b,c` | `random:n,seed` | `local:h,{a,b},seed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeSpec {
    Nary { n_children: usize, height: usize },
    PerLevel { counts: Vec<usize> },
    RandomTree { n: usize, seed: u64 },
    LocallyPerfect { height: usize, choices: Vec<usize>, seed: u64 },
}

impl ShapeSpec {
    /// Builds the requested tree.
    pub fn build(&self) -> Result<RootedTree, GenError> {
        match self {
            ShapeSpec::Nary { n_children, height } => gen_perfect_nary(*n_children, *height),
            ShapeSpec::PerLevel { counts } => gen_perfect_per_level(counts),
            ShapeSpec::RandomTree { n, seed } => gen_random_tree(*n, *seed),
            ShapeSpec::LocallyPerfect { height, choices, seed } => {
                gen_locally_perfect(*height, choices, *seed)
            }
        }
    }
}

/// Shape spec parse failure with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid shape spec: {0}")]
pub struct ParseShapeError(String);

fn parse_usize(s: &str, what: &str) -> Result<usize, ParseShapeError> {
    s.trim()
        .parse()
        .map_err(|_| ParseShapeError(format!("{what} must be a non-negative integer, got {s:?}")))
}

fn parse_counts(s: &str, what: &str) -> Result<Vec<usize>, ParseShapeError> {
    let counts = s
        .split(',')
        .map(|part| parse_usize(part, what))
        .collect::<Result<Vec<usize>, _>>()?;
    if counts.is_empty() || counts.contains(&0) {
        return Err(ParseShapeError(format!("{what} must be a non-empty list of integers ≥ 1")));
    }
    Ok(counts)
}

impl FromStr for ShapeSpec {
    type Err = ParseShapeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, rest) = s
            .split_once(':')
            .ok_or_else(|| ParseShapeError(format!("expected family:args, got {s:?}")))?;
        match family {
            "nary" => {
                let (n, h) = rest.split_once(',').ok_or_else(|| {
                    ParseShapeError(format!("nary takes N,height, got {rest:?}"))
                })?;
                let n_children = parse_usize(n, "branching factor")?;
                if n_children == 0 {
                    return Err(ParseShapeError("branching factor must be ≥ 1".into()));
                }
                Ok(ShapeSpec::Nary { n_children, height: parse_usize(h, "height")? })
            }
            "levels" => Ok(ShapeSpec::PerLevel { counts: parse_counts(rest, "level counts")? }),
            "random" => {
                let (n, seed) = rest.split_once(',').ok_or_else(|| {
                    ParseShapeError(format!("random takes n,seed, got {rest:?}"))
                })?;
                let n = parse_usize(n, "vertex count")?;
                if n == 0 {
                    return Err(ParseShapeError("vertex count must be ≥ 1".into()));
                }
                let seed = seed.trim().parse().map_err(|_| {
                    ParseShapeError(format!("seed must be a u64, got {seed:?}"))
                })?;
                Ok(ShapeSpec::RandomTree { n, seed })
            }
            "local" => {
                // local:h,{a,b,...},seed
                let (h, rest) = rest.split_once(",{").ok_or_else(|| {
                    ParseShapeError(format!("local takes height,{{choices}},seed, got {rest:?}"))
                })?;
                let (choices, seed) = rest.split_once("},").ok_or_else(|| {
                    ParseShapeError("missing closing brace or seed in local spec".into())
                })?;
                let seed = seed.trim().parse().map_err(|_| {
                    ParseShapeError(format!("seed must be a u64, got {seed:?}"))
                })?;
                Ok(ShapeSpec::LocallyPerfect {
                    height: parse_usize(h, "height")?,
                    choices: parse_counts(choices, "child-count choices")?,
                    seed,
                })
            }
            other => Err(ParseShapeError(format!(
                "unknown family {other:?}; expected nary, levels, random, or local"
            ))),
        }
    }
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(counts: &[usize]) -> String {
            counts.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        }
        match self {
            ShapeSpec::Nary { n_children, height } => write!(f, "nary:{n_children},{height}"),
            ShapeSpec::PerLevel { counts } => write!(f, "levels:{}", join(counts)),
            ShapeSpec::RandomTree { n, seed } => write!(f, "random:{n},{seed}"),
            ShapeSpec::LocallyPerfect { height, choices, seed } => {
                write!(f, "local:{height},{{{}}},{seed}", join(choices))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::ShapeClass;
    use proptest::prelude::*;

    #[test]
    fn per_level_matches_request() {
        let t = gen_perfect_per_level(&[3, 4, 1]).unwrap();
        assert_eq!(t.vertex_count(), 28);
        assert_eq!(t.classify_shape(), ShapeClass::PerfectPerLevel { counts: vec![3, 4, 1] });
        let t = gen_perfect_nary(2, 3).unwrap();
        assert_eq!(t.vertex_count(), 15);
        assert_eq!(t.classify_shape(), ShapeClass::PerfectNary { n_children: 2, height: 3 });
    }

    #[test]
    fn size_cap_is_enforced() {
        assert_eq!(
            gen_perfect_nary(10, 10),
            Err(GenError::SizeOverflow { cap: MAX_GENERATED_VERTICES })
        );
        // Width overflow far beyond usize is caught too.
        assert_eq!(
            gen_perfect_per_level(&[usize::MAX / 2; 3]),
            Err(GenError::SizeOverflow { cap: MAX_GENERATED_VERTICES })
        );
        assert_eq!(
            gen_random_tree(MAX_GENERATED_VERTICES + 1, 0),
            Err(GenError::SizeOverflow { cap: MAX_GENERATED_VERTICES })
        );
    }

    #[test]
    fn random_trees_are_deterministic_per_seed() {
        let a = gen_random_tree(12, 5).unwrap();
        let b = gen_random_tree(12, 5).unwrap();
        let c = gen_random_tree(12, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn tiny_random_trees() {
        assert_eq!(gen_random_tree(1, 0).unwrap().vertex_count(), 1);
        let k2 = gen_random_tree(2, 0).unwrap();
        assert_eq!(k2.vertex_count(), 2);
        assert_eq!(k2.children(0), &[1]);
    }

    #[test]
    fn locally_perfect_trees_classify_at_least_locally_perfect() {
        for seed in 0..10u64 {
            let t = gen_locally_perfect(3, &[1, 2, 3], seed).unwrap();
            assert!(matches!(
                t.classify_shape(),
                ShapeClass::LocallyPerfect
                    | ShapeClass::PerfectPerLevel { .. }
                    | ShapeClass::PerfectNary { .. }
            ));
            assert_eq!(t, gen_locally_perfect(3, &[1, 2, 3], seed).unwrap());
        }
    }

    #[test]
    fn seed_colorings_are_valid() {
        let t = gen_random_tree(14, 3).unwrap();
        let graph = t.to_graph();
        let mono = gen_seed_coloring(&t, SeedColoringMode::Monochromatic, 0).unwrap();
        assert_eq!(mono.class_count(), 1);
        let mut seen_multi = false;
        for seed in 0..16u64 {
            match gen_seed_coloring(&t, SeedColoringMode::RandomConnected, seed) {
                Ok(c) => {
                    assert!(verify_quorum(&graph, &c).unwrap().valid);
                    assert_eq!(
                        gen_seed_coloring(&t, SeedColoringMode::RandomConnected, seed).unwrap(),
                        c
                    );
                    seen_multi |= c.class_count() > 1;
                }
                Err(GenError::RetriesExhausted { .. }) => {}
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
        assert!(seen_multi, "at least one seed should produce a multi-class coloring");
    }

    #[test]
    fn shape_specs_parse_and_print() {
        let cases = [
            ("nary:2,3", ShapeSpec::Nary { n_children: 2, height: 3 }),
            ("levels:3,4,1", ShapeSpec::PerLevel { counts: vec![3, 4, 1] }),
            ("random:16,42", ShapeSpec::RandomTree { n: 16, seed: 42 }),
            (
                "local:3,{1,2},7",
                ShapeSpec::LocallyPerfect { height: 3, choices: vec![1, 2], seed: 7 },
            ),
        ];
        for (text, spec) in cases {
            assert_eq!(text.parse::<ShapeSpec>().unwrap(), spec);
            assert_eq!(spec.to_string(), text);
            assert_eq!(spec.to_string().parse::<ShapeSpec>().unwrap(), spec);
        }
        for bad in [
            "nary:2", "levels:", "levels:0,2", "random:0,1", "random:4", "pyramid:3",
            "local:3,{},1", "local:3,{1,2}", "nary:0,3",
        ] {
            assert!(bad.parse::<ShapeSpec>().is_err(), "{bad} should not parse");
        }
    }

    proptest! {
        /// Prüfer decoding yields a tree on n vertices: n − 1 edges, all
        /// reachable from 0, degrees matching sequence multiplicities.
        #[test]
        fn pruefer_decodes_to_trees(seq in proptest::collection::vec(0usize..9, 7)) {
            let n = 9usize;
            let edges = decode_pruefer(n, &seq);
            prop_assert_eq!(edges.len(), n - 1);
            let mut degree = vec![0usize; n];
            for &(u, v) in &edges {
                prop_assert_ne!(u, v);
                degree[u] += 1;
                degree[v] += 1;
            }
            for (v, &deg) in degree.iter().enumerate() {
                let mult = seq.iter().filter(|&&s| s == v).count();
                prop_assert_eq!(deg, mult + 1);
            }
            // n − 1 edges and connected ⇒ a tree.
            let mut adjacency = vec![Vec::new(); n];
            for &(u, v) in &edges {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut stack = vec![0usize];
            while let Some(v) = stack.pop() {
                for &u in &adjacency[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            prop_assert!(seen.iter().all(|&s| s));
        }

        /// Generated per-level trees classify back to their request.
        #[test]
        fn per_level_round_trips(counts in proptest::collection::vec(1usize..=4, 0..=4)) {
            let t = gen_perfect_per_level(&counts).unwrap();
            let shape = t.classify_shape();
            prop_assert_eq!(shape.per_level_counts(), Some(counts));
        }
    }
}
