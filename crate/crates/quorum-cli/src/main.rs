//! `quorum`: construct, verify, bound, and benchmark quorum colorings of
//! rooted trees.
//!
//! Exit codes: 0 on success (and on `verify` of a valid coloring), 1 on
//! domain errors or failed checks, 2 on command-line usage errors.

mod bench;

use std::fs;
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use quorum_core::algorithms::{
    brute_force_graph, brute_force_tree, closed_form_perfect_binary, exact_binary,
    matching_lower_bound, refine_coloring, solve_per_level, DEFAULT_GRAPH_LIMIT,
    DEFAULT_TREE_LIMIT,
};
use quorum_core::coloring::{is_cost_effective, verify_quorum, Graph};
use quorum_core::formats::{
    emit_alpha_trace, emit_coloring, emit_dot_tree, emit_report, emit_tree, parse_coloring,
    parse_tree, violation_lines, ResultRecord, TreeFormat,
};
use quorum_core::generators::{gen_seed_coloring, SeedColoringMode, ShapeSpec};
use quorum_core::tree::RootedTree;

#[derive(Parser)]
#[command(
    name = "quorum",
    version,
    about = "Quorum colorings of rooted trees: every vertex keeps at least half \
             of its closed neighborhood in its own class"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tree and write it in a chosen format.
    Gen(GenArgs),
    /// Maximum-class coloring of a perfect per-level tree (linear time).
    Solve(SolveArgs),
    /// Grow a valid coloring into a cost-effective one, never losing classes.
    Refine(RefineArgs),
    /// Check that a coloring is a valid quorum coloring.
    Verify(VerifyArgs),
    /// Matching-based lower bound on the number of classes.
    Bound(TreeOnlyArgs),
    /// Exact class count where an exact method applies.
    Exact(TreeOnlyArgs),
    /// Exhaustive search on small instances.
    Bruteforce(BruteforceArgs),
    /// Closed-form class count for perfect binary trees.
    ClosedForm(ClosedFormArgs),
    /// Export a tree (optionally colored) as Graphviz DOT.
    ExportDot(ExportDotArgs),
    /// Time the solver on growing instances and check linear scaling.
    Bench(bench::BenchArgs),
}

/// Where the instance comes from: a generated shape or a tree file.
#[derive(Args)]
struct TreeInput {
    /// Build the instance from a shape spec:
    /// nary:N,h | levels:a,b,c | random:n,seed | local:h,{a,b},seed.
    #[arg(
        long,
        value_name = "SPEC",
        conflicts_with = "tree",
        required_unless_present = "tree"
    )]
    shape: Option<ShapeSpec>,
    /// Read the tree from a file, or "-" for stdin.
    #[arg(long, value_name = "PATH")]
    tree: Option<String>,
    /// Format of the --tree input.
    #[arg(long, value_name = "FMT", default_value_t = TreeFormat::ParentArray)]
    format: TreeFormat,
}

impl TreeInput {
    /// Loads the tree plus a short label naming the instance.
    fn load(&self) -> Result<(RootedTree, String)> {
        if let Some(spec) = &self.shape {
            let tree = spec.build().with_context(|| format!("building {spec}"))?;
            Ok((tree, spec.to_string()))
        } else {
            let path = self.tree.as_deref().expect("clap enforces one input source");
            let text = read_input(path)?;
            let tree = parse_tree(&text, self.format)
                .with_context(|| format!("parsing {path} as {}", self.format))?;
            Ok((tree, path.to_string()))
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Shape spec to build (see --shape on other commands).
    #[arg(long, value_name = "SPEC")]
    shape: ShapeSpec,
    /// Output format.
    #[arg(long, value_name = "FMT", default_value_t = TreeFormat::ParentArray)]
    format: TreeFormat,
    /// Output path, or "-" for stdout.
    #[arg(long, value_name = "PATH", default_value = "-")]
    out: String,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: TreeInput,
    /// Write the resulting coloring as a JSON document ("-" for stdout).
    #[arg(long, value_name = "PATH")]
    coloring_out: Option<String>,
    /// Include the per-level trace (new classes per vertex, shared counts).
    #[arg(long)]
    trace: bool,
    /// Emit one JSON result line instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeedModeArg {
    /// All vertices in one class.
    Mono,
    /// Random connected classes from per-edge coin flips.
    Random,
}

impl From<SeedModeArg> for SeedColoringMode {
    fn from(mode: SeedModeArg) -> Self {
        match mode {
            SeedModeArg::Mono => SeedColoringMode::Monochromatic,
            SeedModeArg::Random => SeedColoringMode::RandomConnected,
        }
    }
}

#[derive(Args)]
struct RefineArgs {
    #[command(flatten)]
    input: TreeInput,
    /// Starting coloring (JSON document; "-" for stdin).
    #[arg(long, value_name = "PATH", conflicts_with_all = ["seed_mode", "seed"])]
    coloring: Option<String>,
    /// Generated starting coloring when --coloring is absent.
    #[arg(long, value_enum, default_value_t = SeedModeArg::Mono)]
    seed_mode: SeedModeArg,
    /// RNG seed for --seed-mode random.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the refined coloring as a JSON document ("-" for stdout).
    #[arg(long, value_name = "PATH")]
    coloring_out: Option<String>,
    /// Emit one JSON result line instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: TreeInput,
    /// Coloring to check (JSON document; "-" for stdin).
    #[arg(long, value_name = "PATH")]
    coloring: String,
    /// Also require every vertex of degree ≥ 2 to be exactly at quorum.
    #[arg(long)]
    cost_effective: bool,
    /// Write the full per-vertex report as a JSON document.
    #[arg(long, value_name = "PATH")]
    report: Option<String>,
    /// Emit one JSON result line instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TreeOnlyArgs {
    #[command(flatten)]
    input: TreeInput,
    /// Emit one JSON result line instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BruteforceArgs {
    /// Build the instance from a shape spec (see --shape on other commands).
    #[arg(
        long,
        value_name = "SPEC",
        conflicts_with_all = ["tree", "complete"],
        required_unless_present_any = ["tree", "complete"]
    )]
    shape: Option<ShapeSpec>,
    /// Read the tree from a file, or "-" for stdin.
    #[arg(long, value_name = "PATH", conflicts_with = "complete")]
    tree: Option<String>,
    /// Format of the --tree input.
    #[arg(long, value_name = "FMT", default_value_t = TreeFormat::ParentArray)]
    format: TreeFormat,
    /// Search a disjoint union of complete graphs instead, e.g. "4" or "3,4".
    #[arg(long, value_name = "SIZES")]
    complete: Option<String>,
    /// Vertex-count cap (default: QUORUM_BRUTEFORCE_TREE_LIMIT or
    /// QUORUM_BRUTEFORCE_GRAPH_LIMIT from the environment, then built-ins).
    #[arg(long, value_name = "N")]
    limit: Option<usize>,
    /// Write the maximum coloring found (trees only; "-" for stdout).
    #[arg(long, value_name = "PATH")]
    coloring_out: Option<String>,
    /// Emit one JSON result line instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClosedFormArgs {
    /// Height of the perfect binary tree.
    #[arg(long)]
    height: usize,
    /// Emit one JSON result line instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExportDotArgs {
    #[command(flatten)]
    input: TreeInput,
    /// Color nodes by this coloring (JSON document; "-" for stdin).
    #[arg(long, value_name = "PATH", conflicts_with = "solve")]
    coloring: Option<String>,
    /// Color nodes by the per-level solver's coloring.
    #[arg(long)]
    solve: bool,
    /// Output path, or "-" for stdout.
    #[arg(long, value_name = "PATH", default_value = "-")]
    out: String,
}

/// Restore the default SIGPIPE disposition so `quorum ... | head` dies
/// quietly like other Unix filters instead of panicking on a closed pipe
/// (the Rust runtime ignores SIGPIPE by default).
fn reset_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Refine(args) => cmd_refine(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Bruteforce(args) => cmd_bruteforce(args),
        Command::ClosedForm(args) => cmd_closed_form(args),
        Command::ExportDot(args) => cmd_export_dot(args),
        Command::Bench(args) => bench::run(&args),
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn write_output(path: &str, content: &str) -> Result<()> {
    if path == "-" {
        print!("{content}");
        Ok(())
    } else {
        fs::write(path, content).with_context(|| format!("writing {path}"))
    }
}

fn env_limit(var: &str) -> Result<Option<usize>> {
    match std::env::var(var) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| anyhow!("{var} must be a non-negative integer, got {s:?}")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(anyhow!("{var}: {e}")),
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let tree = args.shape.build().with_context(|| format!("building {}", args.shape))?;
    write_output(&args.out, &emit_tree(&tree, args.format))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let (tree, instance) = args.input.load()?;
    let start = Instant::now();
    let (coloring, trace) = solve_per_level(&tree).map_err(|e| anyhow!("{e}"))?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    if let Some(path) = &args.coloring_out {
        write_output(path, &emit_coloring(&coloring))?;
    }
    if args.json {
        let mut rec = ResultRecord::new("solve");
        rec.instance = Some(instance);
        rec.n = Some(tree.vertex_count());
        rec.psi_q = Some(coloring.class_count());
        rec.elapsed_ms = Some(elapsed_ms);
        rec.extra.insert("operations".into(), json!(trace.ops().total()));
        if args.trace {
            rec.trace = Some(serde_json::from_str(&emit_alpha_trace(&trace))?);
        }
        println!("{}", rec.to_json_line());
    } else {
        println!("instance {instance}: n = {}", tree.vertex_count());
        println!("classes: {}", coloring.class_count());
        println!(
            "operations: {} (5n = {})",
            trace.ops().total(),
            5 * tree.vertex_count() as u64
        );
        println!("elapsed: {elapsed_ms:.3} ms");
        if args.trace {
            print!("{}", emit_alpha_trace(&trace));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_refine(args: RefineArgs) -> Result<ExitCode> {
    let (tree, instance) = args.input.load()?;
    let initial = match &args.coloring {
        Some(path) => parse_coloring(&read_input(path)?)
            .with_context(|| format!("parsing coloring {path}"))?,
        None => gen_seed_coloring(&tree, args.seed_mode.into(), args.seed)
            .map_err(|e| anyhow!("{e}"))?,
    };
    let start = Instant::now();
    let (refined, trace) = refine_coloring(&tree, &initial).map_err(|e| anyhow!("{e}"))?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    if let Some(path) = &args.coloring_out {
        write_output(path, &emit_coloring(&refined))?;
    }
    if args.json {
        let mut rec = ResultRecord::new("refine");
        rec.instance = Some(instance);
        rec.n = Some(tree.vertex_count());
        rec.psi_q = Some(refined.class_count());
        rec.elapsed_ms = Some(elapsed_ms);
        rec.extra.insert("initial_classes".into(), json!(trace.initial_classes));
        rec.extra.insert("steps".into(), json!(trace.steps.len()));
        println!("{}", rec.to_json_line());
    } else {
        println!("instance {instance}: n = {}", tree.vertex_count());
        println!(
            "classes: {} -> {} ({} refinement steps)",
            trace.initial_classes,
            refined.class_count(),
            trace.steps.len()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let (tree, instance) = args.input.load()?;
    let coloring = parse_coloring(&read_input(&args.coloring)?)
        .with_context(|| format!("parsing coloring {}", args.coloring))?;
    let graph = tree.to_graph();
    let report = verify_quorum(&graph, &coloring).map_err(|e| anyhow!("{e}"))?;
    if let Some(path) = &args.report {
        write_output(path, &emit_report(&report))?;
    }
    let cost_effective = if report.valid {
        Some(is_cost_effective(&graph, &coloring).map_err(|e| anyhow!("{e}"))?)
    } else {
        None
    };
    let ok = report.valid && (!args.cost_effective || cost_effective == Some(true));

    if args.json {
        let mut rec = ResultRecord::new("verify");
        rec.instance = Some(instance.clone());
        rec.n = Some(tree.vertex_count());
        rec.valid = Some(report.valid);
        rec.extra.insert("classes".into(), json!(coloring.class_count()));
        rec.extra.insert("violations".into(), json!(report.violations));
        if let Some(ce) = cost_effective {
            rec.extra.insert("cost_effective".into(), json!(ce));
        }
        println!("{}", rec.to_json_line());
    } else if report.valid {
        println!(
            "valid: {} classes on {} vertices",
            coloring.class_count(),
            tree.vertex_count()
        );
        if let Some(ce) = cost_effective {
            println!("cost-effective: {}", if ce { "yes" } else { "no" });
        }
    }
    if !report.valid {
        eprintln!(
            "invalid quorum coloring on {instance}: {} violation(s)",
            report.violations.len()
        );
        for line in violation_lines(&report) {
            eprintln!("{line}");
        }
    } else if !ok {
        eprintln!("coloring on {instance} is valid but not cost-effective");
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_bound(args: TreeOnlyArgs) -> Result<ExitCode> {
    let (tree, instance) = args.input.load()?;
    let bound = matching_lower_bound(&tree).map_err(|e| anyhow!("{e}"))?;
    if args.json {
        let mut rec = ResultRecord::new("lower_bound");
        rec.instance = Some(instance);
        rec.n = Some(tree.vertex_count());
        rec.value = Some(bound as u64);
        println!("{}", rec.to_json_line());
    } else {
        println!(
            "matching lower bound for {instance}: {bound} classes (n = {})",
            tree.vertex_count()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_exact(args: TreeOnlyArgs) -> Result<ExitCode> {
    let (tree, instance) = args.input.load()?;
    let start = Instant::now();
    let (method, value) = if tree.classify_shape().per_level_counts().is_some() {
        let (coloring, _) = solve_per_level(&tree).expect("per-level shape verified");
        ("solve", coloring.class_count())
    } else if tree.max_degree() <= 3 {
        ("binary_exact", exact_binary(&tree).map_err(|e| anyhow!("{e}"))?)
    } else {
        bail!(
            "no exact method applies to {instance}: not perfect per-level and maximum degree {} \
             exceeds 3; use `bound` for a lower bound or `bruteforce` for small instances",
            tree.max_degree()
        );
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    if args.json {
        let mut rec = ResultRecord::new(method);
        rec.instance = Some(instance);
        rec.n = Some(tree.vertex_count());
        rec.psi_q = Some(value);
        rec.elapsed_ms = Some(elapsed_ms);
        println!("{}", rec.to_json_line());
    } else {
        println!(
            "exact class count for {instance}: {value} (n = {}, via {method})",
            tree.vertex_count()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bruteforce(args: BruteforceArgs) -> Result<ExitCode> {
    if let Some(sizes) = &args.complete {
        let sizes: Vec<usize> = sizes
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| anyhow!("--complete takes sizes ≥ 1, got {s:?}"))
            })
            .collect::<Result<_>>()?;
        let mut graph = Graph::complete(sizes[0]);
        for &k in &sizes[1..] {
            graph = graph.disjoint_union(&Graph::complete(k));
        }
        let limit = match args.limit {
            Some(l) => l,
            None => env_limit("QUORUM_BRUTEFORCE_GRAPH_LIMIT")?.unwrap_or(DEFAULT_GRAPH_LIMIT),
        };
        let instance = format!("complete:{}", args.complete.as_deref().unwrap());
        let start = Instant::now();
        let psi = brute_force_graph(&graph, limit).map_err(|e| anyhow!("{e}"))?;
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        if args.json {
            let mut rec = ResultRecord::new("bruteforce_graph");
            rec.instance = Some(instance);
            rec.n = Some(graph.vertex_count());
            rec.psi_q = Some(psi);
            rec.elapsed_ms = Some(elapsed_ms);
            println!("{}", rec.to_json_line());
        } else {
            println!(
                "maximum classes for {instance}: {psi} (n = {})",
                graph.vertex_count()
            );
        }
        return Ok(ExitCode::SUCCESS);
    }

    let input = TreeInput { shape: args.shape, tree: args.tree, format: args.format };
    let (tree, instance) = input.load()?;
    let limit = match args.limit {
        Some(l) => l,
        None => env_limit("QUORUM_BRUTEFORCE_TREE_LIMIT")?.unwrap_or(DEFAULT_TREE_LIMIT),
    };
    let start = Instant::now();
    let (psi, witness) = brute_force_tree(&tree, limit).map_err(|e| anyhow!("{e}"))?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(path) = &args.coloring_out {
        write_output(path, &emit_coloring(&witness))?;
    }
    if args.json {
        let mut rec = ResultRecord::new("bruteforce_tree");
        rec.instance = Some(instance);
        rec.n = Some(tree.vertex_count());
        rec.psi_q = Some(psi);
        rec.elapsed_ms = Some(elapsed_ms);
        println!("{}", rec.to_json_line());
    } else {
        println!(
            "maximum classes for {instance}: {psi} (n = {})",
            tree.vertex_count()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_closed_form(args: ClosedFormArgs) -> Result<ExitCode> {
    let value = closed_form_perfect_binary(args.height).map_err(|e| anyhow!("{e}"))?;
    if args.json {
        let mut rec = ResultRecord::new("closed_form");
        rec.value = Some(value);
        rec.extra.insert("height".into(), json!(args.height));
        println!("{}", rec.to_json_line());
    } else {
        println!(
            "perfect binary tree of height {}: {value} classes",
            args.height
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_export_dot(args: ExportDotArgs) -> Result<ExitCode> {
    let (tree, _) = args.input.load()?;
    let coloring = if args.solve {
        Some(solve_per_level(&tree).map_err(|e| anyhow!("{e}"))?.0)
    } else if let Some(path) = &args.coloring {
        Some(
            parse_coloring(&read_input(path)?)
                .with_context(|| format!("parsing coloring {path}"))?,
        )
    } else {
        None
    };
    let dot = emit_dot_tree(&tree, coloring.as_ref()).map_err(|e| anyhow!("{e}"))?;
    write_output(&args.out, &dot)?;
    Ok(ExitCode::SUCCESS)
}
