//! Solver timing across a family of growing trees, with linear-scaling and
//! operation-count checks.
//!
//! For each height the solve is repeated enough times that one sample lasts
//! at least ~2 ms, then the median and fastest per-solve times over `--reps`
//! samples are reported. Rows fail when the operation count reaches 5n, when
//! the class count disagrees with the closed recurrence, or when the
//! fastest-time ratio to a row of roughly half the size exceeds 3.0 (a
//! linear algorithm doubles). The ratio uses the fastest sample because
//! scheduler or allocator interruptions only ever add time, so the minimum
//! is the stable estimate of the true cost.

use std::hint::black_box;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde_json::json;

use quorum_core::algorithms::{alpha_closed, solve_per_level};
use quorum_core::formats::ResultRecord;
use quorum_core::generators::gen_perfect_nary;

/// Ratio of fastest times allowed between consecutive rows whose sizes
/// roughly double; generous against timer noise but far below quadratic
/// growth (which would show a factor near 4).
const MAX_DOUBLING_RATIO: f64 = 3.0;
/// Size ratios treated as "roughly doubling".
const DOUBLING_WINDOW: (f64, f64) = (1.8, 2.2);
/// Minimum duration of one timed sample.
const MIN_SAMPLE_SECS: f64 = 2e-3;

#[derive(Args)]
pub struct BenchArgs {
    /// Tree family: "nary:N" (nary:1 is a path).
    #[arg(long, value_name = "FAMILY", default_value = "nary:2")]
    family: String,
    /// Heights to sample: inclusive range "10..16" or list "10,12,14".
    #[arg(long, value_name = "HEIGHTS", default_value = "10..16")]
    heights: String,
    /// Timed samples per height (median reported, fastest checked).
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Emit one JSON result line instead of the table.
    #[arg(long)]
    json: bool,
}

struct BenchRow {
    height: usize,
    n: usize,
    classes: usize,
    ops: u64,
    median_ms: f64,
    best_ms: f64,
    /// Fastest-time ratio to the previous row, when sizes roughly double.
    ratio: Option<f64>,
    pass: bool,
    note: String,
}

fn parse_family(family: &str) -> Result<usize> {
    let n = family
        .strip_prefix("nary:")
        .and_then(|n| n.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .with_context(|| format!("--family must be \"nary:N\" with N ≥ 1, got {family:?}"))?;
    Ok(n)
}

fn parse_heights(heights: &str) -> Result<Vec<usize>> {
    let parsed: Option<Vec<usize>> = if let Some((a, b)) = heights.split_once("..") {
        match (a.trim().parse::<usize>(), b.trim().parse::<usize>()) {
            (Ok(a), Ok(b)) if a <= b => Some((a..=b).collect()),
            _ => None,
        }
    } else {
        heights.split(',').map(|h| h.trim().parse::<usize>().ok()).collect()
    };
    match parsed {
        Some(hs) if !hs.is_empty() => Ok(hs),
        _ => bail!("--heights must be an inclusive range \"a..b\" or a list \"a,b,c\", got {heights:?}"),
    }
}

/// Milliseconds per solve, once timed over enough iterations to dominate
/// timer noise.
fn sample_ms(tree: &quorum_core::tree::RootedTree, iters: usize) -> f64 {
    let start = Instant::now();
    for _ in 0..iters {
        black_box(solve_per_level(black_box(tree)).expect("bench trees are per-level"));
    }
    start.elapsed().as_secs_f64() * 1e3 / iters as f64
}

pub fn run(args: &BenchArgs) -> Result<ExitCode> {
    let branching = parse_family(&args.family)?;
    let heights = parse_heights(&args.heights)?;
    if args.reps == 0 {
        bail!("--reps must be at least 1");
    }

    let mut rows: Vec<BenchRow> = Vec::new();
    for &height in &heights {
        let tree = gen_perfect_nary(branching, height)
            .with_context(|| format!("building nary:{branching},{height}"))?;
        let n = tree.vertex_count();
        let (coloring, trace) = solve_per_level(&tree).expect("perfect n-ary is per-level");
        let ops = trace.ops().total();
        let expected = alpha_closed(&vec![branching; height]);

        // Scale iterations until one sample meets the minimum duration.
        let mut iters = 1usize;
        loop {
            let start = Instant::now();
            for _ in 0..iters {
                black_box(solve_per_level(black_box(&tree)).expect("bench trees are per-level"));
            }
            if start.elapsed().as_secs_f64() >= MIN_SAMPLE_SECS || iters >= (1 << 22) {
                break;
            }
            iters *= 2;
        }
        let mut samples: Vec<f64> = (0..args.reps).map(|_| sample_ms(&tree, iters)).collect();
        samples.sort_by(f64::total_cmp);
        let median_ms = samples[samples.len() / 2];
        let best_ms = samples[0];

        let ratio = rows.last().and_then(|prev: &BenchRow| {
            let growth = n as f64 / prev.n as f64;
            (DOUBLING_WINDOW.0..=DOUBLING_WINDOW.1)
                .contains(&growth)
                .then(|| best_ms / prev.best_ms)
        });

        let mut pass = true;
        let mut notes: Vec<String> = Vec::new();
        if ops >= 5 * n as u64 {
            pass = false;
            notes.push(format!("ops {ops} not below 5n = {}", 5 * n));
        }
        if coloring.class_count() != expected {
            pass = false;
            notes.push(format!(
                "classes {} disagree with recurrence {expected}",
                coloring.class_count()
            ));
        }
        if let Some(r) = ratio {
            if r > MAX_DOUBLING_RATIO {
                pass = false;
                notes.push(format!("time grew {r:.2}x on a ~2x instance"));
            }
        }
        rows.push(BenchRow {
            height,
            n,
            classes: coloring.class_count(),
            ops,
            median_ms,
            best_ms,
            ratio,
            pass,
            note: notes.join("; "),
        });
    }

    let all_pass = rows.iter().all(|r| r.pass);
    if args.json {
        let mut rec = ResultRecord::new("bench");
        rec.instance = Some(format!("nary:{branching}"));
        rec.valid = Some(all_pass);
        rec.extra.insert("reps".into(), json!(args.reps));
        rec.extra.insert(
            "rows".into(),
            json!(rows
                .iter()
                .map(|r| {
                    json!({
                        "height": r.height,
                        "n": r.n,
                        "classes": r.classes,
                        "operations": r.ops,
                        "median_ms": r.median_ms,
                        "best_ms": r.best_ms,
                        "ratio": r.ratio,
                        "pass": r.pass,
                        "note": r.note,
                    })
                })
                .collect::<Vec<_>>()),
        );
        println!("{}", rec.to_json_line());
    } else {
        println!(
            "family nary:{branching}, reps {}, per-solve times (linear check: \
             fastest-time ratio ≤ {MAX_DOUBLING_RATIO} when n roughly doubles)",
            args.reps
        );
        println!(
            "{:>6} {:>10} {:>10} {:>12} {:>7} {:>12} {:>12} {:>7}  check",
            "height", "n", "classes", "ops", "ops/n", "median ms", "best ms", "ratio"
        );
        for r in &rows {
            println!(
                "{:>6} {:>10} {:>10} {:>12} {:>7.2} {:>12.4} {:>12.4} {:>7} {:>5}{}{}",
                r.height,
                r.n,
                r.classes,
                r.ops,
                r.ops as f64 / r.n as f64,
                r.median_ms,
                r.best_ms,
                r.ratio.map_or_else(|| "-".to_string(), |x| format!("{x:.2}")),
                if r.pass { "PASS" } else { "FAIL" },
                if r.note.is_empty() { "" } else { "  " },
                r.note,
            );
        }
        println!("overall: {}", if all_pass { "PASS" } else { "FAIL" });
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
