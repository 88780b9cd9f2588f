//! Text formats: tree and coloring parsing/serialization, JSON result
//! records, quorum reports, and Graphviz DOT export.
//!
//! Three tree encodings are supported. `parent-array` is a plain-text list
//! (vertex count, then one parent per line, `-1` for the root). `edge-list`
//! is a header `n root` followed by `n - 1` undirected edges that are
//! re-oriented away from the root. `json` wraps the parent array in a typed
//! document envelope. All JSON documents carry `kind` and `version` fields
//! so that mixed streams can be told apart.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algorithms::AlphaTrace;
use crate::coloring::{quorum_requirement, Coloring, ColoringError, Graph, QuorumReport};
use crate::tree::RootedTree;

/// Version stamp written into every JSON document.
pub const FORMAT_VERSION: &str = "1";

/// Tree encodings accepted and produced by [`parse_tree`] / [`emit_tree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeFormat {
    ParentArray,
    Json,
    EdgeList,
}

impl FromStr for TreeFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "parent-array" => Ok(TreeFormat::ParentArray),
            "json" => Ok(TreeFormat::Json),
            "edge-list" => Ok(TreeFormat::EdgeList),
            other => Err(format!(
                "unknown tree format {other:?}; expected parent-array, json, or edge-list"
            )),
        }
    }
}

impl fmt::Display for TreeFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TreeFormat::ParentArray => "parent-array",
            TreeFormat::Json => "json",
            TreeFormat::EdgeList => "edge-list",
        })
    }
}

/// Parse or serialization failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    /// The input text is malformed at a specific position.
    #[error("line {line}, column {column}: {message}")]
    SyntaxError { line: usize, column: usize, message: String },
    /// The input parsed but does not describe a valid object.
    #[error("{message}")]
    SemanticError { message: String },
}

fn semantic(message: impl Into<String>) -> FormatError {
    FormatError::SemanticError { message: message.into() }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::SyntaxError { line, column, message: message.into() }
}

fn json_error(err: serde_json::Error) -> FormatError {
    match err.classify() {
        serde_json::error::Category::Data => semantic(err.to_string()),
        _ => syntax(err.line().max(1), err.column().max(1), err.to_string()),
    }
}

/// Kinds of JSON documents this crate reads and writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocKind {
    Tree,
    Graph,
    Coloring,
    Report,
    Trace,
    Result,
}

impl fmt::Display for DocKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            DocKind::Tree => "tree",
            DocKind::Graph => "graph",
            DocKind::Coloring => "coloring",
            DocKind::Report => "report",
            DocKind::Trace => "trace",
            DocKind::Result => "result",
        };
        f.write_str(name)
    }
}

/// Envelope shared by all JSON documents: a kind tag, a format version, and
/// the kind-specific fields flattened alongside them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub kind: DocKind,
    pub version: String,
    #[serde(flatten)]
    pub payload: Map<String, Value>,
}

/// Parses a JSON document envelope and checks its version.
pub fn parse_document(input: &str) -> Result<Document, FormatError> {
    let doc: Document = serde_json::from_str(input).map_err(json_error)?;
    if doc.version != FORMAT_VERSION {
        return Err(semantic(format!(
            "unsupported document version {:?} (this build reads version {FORMAT_VERSION:?})",
            doc.version
        )));
    }
    Ok(doc)
}

fn expect_kind(doc: &Document, kind: DocKind) -> Result<(), FormatError> {
    if doc.kind != kind {
        return Err(semantic(format!("expected a {kind} document, got kind {:?}", doc.kind)));
    }
    Ok(())
}

fn payload_field<T: for<'de> Deserialize<'de>>(
    doc: &Document,
    field: &str,
) -> Result<T, FormatError> {
    let value = doc
        .payload
        .get(field)
        .ok_or_else(|| semantic(format!("{} document is missing field {field:?}", doc.kind)))?;
    serde_json::from_value(value.clone())
        .map_err(|e| semantic(format!("field {field:?}: {e}")))
}

/// 1-based line iterator that tolerates `\r\n` endings.
fn numbered_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input.lines().map(|l| l.strip_suffix('\r').unwrap_or(l)).enumerate().map(|(i, l)| (i + 1, l))
}

fn token_column(line: &str, token: &str) -> usize {
    line.find(token).map_or(1, |p| p + 1)
}

fn parse_int_token<T: FromStr>(
    line_no: usize,
    line: &str,
    token: &str,
    what: &str,
) -> Result<T, FormatError> {
    token.parse().map_err(|_| {
        syntax(line_no, token_column(line, token), format!("expected {what}, got {token:?}"))
    })
}

/// Reads a tree in the given format.
pub fn parse_tree(input: &str, format: TreeFormat) -> Result<RootedTree, FormatError> {
    match format {
        TreeFormat::ParentArray => parse_parent_array(input),
        TreeFormat::Json => parse_tree_json(input),
        TreeFormat::EdgeList => parse_edge_list(input),
    }
}

/// Writes a tree in the given format. Output always ends with a newline.
pub fn emit_tree(tree: &RootedTree, format: TreeFormat) -> String {
    match format {
        TreeFormat::ParentArray => {
            let mut out = format!("{}\n", tree.vertex_count());
            for v in 0..tree.vertex_count() {
                match tree.parent(v) {
                    Some(p) => out.push_str(&format!("{p}\n")),
                    None => out.push_str("-1\n"),
                }
            }
            out
        }
        TreeFormat::Json => {
            let parents: Vec<Value> = (0..tree.vertex_count())
                .map(|v| tree.parent(v).map_or(Value::Null, |p| json!(p)))
                .collect();
            let doc = json!({
                "kind": "tree",
                "version": FORMAT_VERSION,
                "n": tree.vertex_count(),
                "root": tree.root(),
                "parents": parents,
            });
            let mut out = doc.to_string();
            out.push('\n');
            out
        }
        TreeFormat::EdgeList => {
            let mut out = format!("{} {}\n", tree.vertex_count(), tree.root());
            for v in 0..tree.vertex_count() {
                if let Some(p) = tree.parent(v) {
                    out.push_str(&format!("{p} {v}\n"));
                }
            }
            out
        }
    }
}

fn parse_parent_array(input: &str) -> Result<RootedTree, FormatError> {
    let mut lines = numbered_lines(input).filter(|(_, l)| !l.trim().is_empty());
    let (line_no, header) = lines.next().ok_or_else(|| syntax(1, 1, "missing vertex count"))?;
    let header_token = header.trim();
    let n: usize = parse_int_token(line_no, header, header_token, "a vertex count")?;
    if n == 0 {
        return Err(semantic("a tree has at least one vertex"));
    }

    let mut parents: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut last_line = line_no;
    for (line_no, line) in lines.by_ref().take(n) {
        last_line = line_no;
        let token = line.trim();
        let value: i64 = parse_int_token(line_no, line, token, "a parent index or -1")?;
        if value == -1 {
            parents.push(None);
        } else if value < 0 {
            return Err(semantic(format!(
                "vertex {}: parent must be -1 or a vertex index, got {value}",
                parents.len()
            )));
        } else {
            parents.push(Some(value as usize));
        }
    }
    if parents.len() < n {
        return Err(syntax(
            last_line + 1,
            1,
            format!("expected {n} parent lines, found {}", parents.len()),
        ));
    }
    if let Some((line_no, line)) = lines.next() {
        return Err(syntax(line_no, token_column(line, line.trim()), "unexpected extra line"));
    }
    RootedTree::from_parent_array(&parents).map_err(|e| semantic(e.to_string()))
}

fn parse_tree_json(input: &str) -> Result<RootedTree, FormatError> {
    let doc = parse_document(input)?;
    expect_kind(&doc, DocKind::Tree)?;
    let n: usize = payload_field(&doc, "n")?;
    let root: usize = payload_field(&doc, "root")?;
    let parents: Vec<Option<usize>> = payload_field(&doc, "parents")?;
    if parents.len() != n {
        return Err(semantic(format!(
            "tree document declares n = {n} but lists {} parents",
            parents.len()
        )));
    }
    let tree = RootedTree::from_parent_array(&parents).map_err(|e| semantic(e.to_string()))?;
    if tree.root() != root {
        return Err(semantic(format!(
            "tree document declares root {root} but vertex {} is the parentless one",
            tree.root()
        )));
    }
    Ok(tree)
}

fn parse_edge_list(input: &str) -> Result<RootedTree, FormatError> {
    let mut lines = numbered_lines(input).filter(|(_, l)| !l.trim().is_empty());
    let (line_no, header) =
        lines.next().ok_or_else(|| syntax(1, 1, "missing header line \"n root\""))?;
    let mut tokens = header.split_whitespace();
    let (n_tok, root_tok) = match (tokens.next(), tokens.next(), tokens.next()) {
        (Some(a), Some(b), None) => (a, b),
        _ => return Err(syntax(line_no, 1, "header must be two integers: n root")),
    };
    let n: usize = parse_int_token(line_no, header, n_tok, "a vertex count")?;
    let root: usize = parse_int_token(line_no, header, root_tok, "a root index")?;
    if n == 0 {
        return Err(semantic("a tree has at least one vertex"));
    }
    if root >= n {
        return Err(semantic(format!("root {root} is out of range for {n} vertices")));
    }

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges_read = 0usize;
    for (line_no, line) in lines {
        if edges_read == n - 1 {
            return Err(syntax(
                line_no,
                token_column(line, line.trim()),
                format!("unexpected extra line: a {n}-vertex tree has exactly {} edges", n - 1),
            ));
        }
        let mut tokens = line.split_whitespace();
        let (u_tok, v_tok) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(syntax(line_no, 1, "edge lines must be two integers: u v")),
        };
        let u: usize = parse_int_token(line_no, line, u_tok, "a vertex index")?;
        let v: usize = parse_int_token(line_no, line, v_tok, "a vertex index")?;
        if u >= n || v >= n {
            return Err(semantic(format!("edge ({u}, {v}) is out of range for {n} vertices")));
        }
        if u == v {
            return Err(semantic(format!("self-loop at vertex {u}")));
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
        edges_read += 1;
    }
    if edges_read != n - 1 {
        return Err(semantic(format!(
            "a {n}-vertex tree has exactly {} edges, found {edges_read}",
            n - 1
        )));
    }

    // Orient away from the root; connectivity with n - 1 edges makes a tree.
    let mut parents: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut visited = 1usize;
    while let Some(v) = queue.pop_front() {
        for &u in &adjacency[v] {
            if !seen[u] {
                seen[u] = true;
                visited += 1;
                parents[u] = Some(v);
                queue.push_back(u);
            }
        }
    }
    if visited != n {
        return Err(semantic("edges do not form a tree (not all vertices reach the root)"));
    }
    RootedTree::from_parent_array(&parents).map_err(|e| semantic(e.to_string()))
}

/// Reads a coloring document: `{"kind":"coloring","version":"1","k":K,"class_of":[...]}`.
///
/// Class ids must lie below `k` and use all `k` values; labels are
/// canonicalized to first-appearance order on load.
pub fn parse_coloring(input: &str) -> Result<Coloring, FormatError> {
    let doc = parse_document(input)?;
    expect_kind(&doc, DocKind::Coloring)?;
    let k: usize = payload_field(&doc, "k")?;
    let class_of: Vec<usize> = payload_field(&doc, "class_of")?;
    if class_of.is_empty() {
        return Err(semantic("coloring document colors no vertices"));
    }
    if let Some(&bad) = class_of.iter().find(|&&c| c >= k) {
        return Err(semantic(format!("class id {bad} is out of range for k = {k}")));
    }
    let mut used = vec![false; k];
    for &c in &class_of {
        used[c] = true;
    }
    let distinct = used.iter().filter(|&&u| u).count();
    if distinct != k {
        return Err(semantic(format!(
            "coloring document declares k = {k} classes but uses {distinct}"
        )));
    }
    Ok(Coloring::from_class_ids(&class_of))
}

/// Writes a coloring as a single-line JSON document plus newline.
pub fn emit_coloring(coloring: &Coloring) -> String {
    let doc = json!({
        "kind": "coloring",
        "version": FORMAT_VERSION,
        "k": coloring.class_count(),
        "class_of": coloring.class_ids(),
    });
    let mut out = doc.to_string();
    out.push('\n');
    out
}

/// One line per violated vertex: `vertex V: same=S need=N`.
pub fn violation_lines(report: &QuorumReport) -> Vec<String> {
    report
        .violations
        .iter()
        .map(|&v| {
            let q = &report.per_vertex[v];
            let need = quorum_requirement(q.closed_size - 1);
            format!("vertex {v}: same={} need={need}", q.same_count)
        })
        .collect()
}

/// Writes a verification report as a JSON document.
pub fn emit_report(report: &QuorumReport) -> String {
    let per_vertex: Vec<Value> = report
        .per_vertex
        .iter()
        .map(|q| {
            json!({
                "closed_size": q.closed_size,
                "same_count": q.same_count,
                "need": quorum_requirement(q.closed_size - 1),
                "satisfied": q.satisfied,
                "tight": q.tight,
            })
        })
        .collect();
    let doc = json!({
        "kind": "report",
        "version": FORMAT_VERSION,
        "valid": report.valid,
        "violations": report.violations,
        "per_vertex": per_vertex,
    });
    let mut out = doc.to_string();
    out.push('\n');
    out
}

/// Writes a solver trace (class counts per level plus operation counts).
pub fn emit_alpha_trace(trace: &AlphaTrace) -> String {
    let values: Vec<Vec<usize>> =
        (0..trace.level_count()).map(|i| trace.values_at_level(i).to_vec()).collect();
    let ops = trace.ops();
    let doc = json!({
        "kind": "trace",
        "version": FORMAT_VERSION,
        "alpha": trace.alpha(),
        "values": values,
        "shared_per_level": trace.shared_per_level(),
        "ops": {
            "comparisons": ops.comparisons,
            "color_assignments": ops.color_assignments,
            "alpha_updates": ops.alpha_updates,
            "sum_additions": ops.sum_additions,
            "total": ops.total(),
        },
    });
    let mut out = doc.to_string();
    out.push('\n');
    out
}

/// One machine-readable outcome of a CLI operation, serialized as a single
/// JSON line. Unset optional fields are omitted; `extra` entries are
/// flattened into the top level.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    kind: &'static str,
    version: &'static str,
    /// What ran: "solve", "refine", "verify", "lower_bound", "binary_exact",
    /// "closed_form", "bruteforce_tree", "bruteforce_graph", or "bench".
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Number of classes in a maximum quorum coloring, when the method
    /// computes one (the quorum coloring number).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_q: Option<usize>,
    /// Generic numeric result for bound-style methods.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Value>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl ResultRecord {
    pub fn new(method: impl Into<String>) -> Self {
        ResultRecord {
            kind: "result",
            version: FORMAT_VERSION,
            method: method.into(),
            instance: None,
            n: None,
            psi_q: None,
            value: None,
            valid: None,
            elapsed_ms: None,
            witness: None,
            trace: None,
            extra: Map::new(),
        }
    }

    /// Single-line JSON (no trailing newline).
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("result records serialize")
    }

    /// Indented JSON for human reading.
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("result records serialize")
    }
}

const DOT_PALETTE: [&str; 24] = [
    "lightblue",
    "lightcoral",
    "palegreen",
    "khaki",
    "plum",
    "sandybrown",
    "paleturquoise",
    "pink",
    "yellowgreen",
    "lightsalmon",
    "skyblue",
    "tan",
    "orchid",
    "aquamarine",
    "gold",
    "thistle",
    "darkseagreen",
    "burlywood",
    "lightsteelblue",
    "rosybrown",
    "mediumturquoise",
    "wheat",
    "lightpink",
    "darkkhaki",
];

/// Fill color for a class id: a fixed 24-color palette, then HSV hues spaced
/// by the golden angle so arbitrarily many classes stay distinguishable.
fn class_fill(class: usize) -> String {
    if let Some(name) = DOT_PALETTE.get(class) {
        (*name).to_string()
    } else {
        let hue = ((class - DOT_PALETTE.len()) as f64 * 137.508).rem_euclid(360.0);
        format!("{:.4} 0.55 0.85", hue / 360.0)
    }
}

/// Graphviz source for a rooted tree, one node per vertex labeled
/// `v_{d,j}` with `d` its depth and `j` its 1-based position within the
/// level; with a coloring, labels gain ` / class` and nodes are filled by
/// class. Fails if the coloring covers a different vertex count.
pub fn emit_dot_tree(tree: &RootedTree, coloring: Option<&Coloring>) -> Result<String, ColoringError> {
    let n = tree.vertex_count();
    if let Some(c) = coloring {
        if c.class_ids().len() != n {
            return Err(ColoringError::SizeMismatch { expected: n, got: c.class_ids().len() });
        }
    }
    let mut position = vec![0usize; n];
    for d in 0..=tree.height() {
        for (j, &v) in tree.level(d).iter().enumerate() {
            position[v] = j + 1;
        }
    }
    let mut out = String::from("digraph tree {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=circle, style=filled, fontsize=10, fillcolor=white];\n");
    for (v, &pos) in position.iter().enumerate() {
        let grid = format!("v_{{{},{}}}", tree.depth(v), pos);
        match coloring {
            Some(c) => out.push_str(&format!(
                "  {v} [label=\"{grid} / {cls}\", fillcolor=\"{fill}\"];\n",
                cls = c.class_of(v),
                fill = class_fill(c.class_of(v)),
            )),
            None => out.push_str(&format!("  {v} [label=\"{grid}\"];\n")),
        }
    }
    for v in 0..n {
        for &c in tree.children(v) {
            out.push_str(&format!("  {v} -> {c};\n"));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Graphviz source for an undirected graph, optionally colored by class.
pub fn emit_dot_graph(graph: &Graph, coloring: Option<&Coloring>) -> Result<String, ColoringError> {
    let n = graph.vertex_count();
    if let Some(c) = coloring {
        if c.class_ids().len() != n {
            return Err(ColoringError::SizeMismatch { expected: n, got: c.class_ids().len() });
        }
    }
    let mut out = String::from("graph g {\n");
    out.push_str("  node [shape=circle, style=filled, fontsize=10, fillcolor=white];\n");
    for v in 0..n {
        match coloring {
            Some(c) => out.push_str(&format!(
                "  {v} [label=\"{v} / {cls}\", fillcolor=\"{fill}\"];\n",
                cls = c.class_of(v),
                fill = class_fill(c.class_of(v)),
            )),
            None => out.push_str(&format!("  {v} [label=\"{v}\"];\n")),
        }
    }
    for (u, v) in graph.edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_quorum;
    use crate::generators::{gen_perfect_per_level, gen_random_tree};
    use proptest::prelude::*;

    fn sample_tree() -> RootedTree {
        // Root 0 with children 1, 2; 1 with children 3, 4.
        RootedTree::from_parent_array(&[None, Some(0), Some(0), Some(1), Some(1)]).unwrap()
    }

    #[test]
    fn parent_array_round_trip() {
        let t = sample_tree();
        let text = emit_tree(&t, TreeFormat::ParentArray);
        assert_eq!(text, "5\n-1\n0\n0\n1\n1\n");
        assert_eq!(parse_tree(&text, TreeFormat::ParentArray).unwrap(), t);
    }

    #[test]
    fn edge_list_round_trip_and_reorientation() {
        let t = sample_tree();
        let text = emit_tree(&t, TreeFormat::EdgeList);
        assert_eq!(text, "5 0\n0 1\n0 2\n1 3\n1 4\n");
        assert_eq!(parse_tree(&text, TreeFormat::EdgeList).unwrap(), t);
        // Edges listed child-first still orient away from the root.
        let shuffled = "5 0\n3 1\n4 1\n2 0\n1 0\n";
        assert_eq!(parse_tree(shuffled, TreeFormat::EdgeList).unwrap(), t);
    }

    #[test]
    fn json_round_trip() {
        let t = sample_tree();
        let text = emit_tree(&t, TreeFormat::Json);
        assert!(text.ends_with('\n') && !text.trim_end().contains('\n'));
        assert_eq!(parse_tree(&text, TreeFormat::Json).unwrap(), t);
        let doc = parse_document(&text).unwrap();
        assert_eq!(doc.kind, DocKind::Tree);
        assert_eq!(doc.version, FORMAT_VERSION);
    }

    #[test]
    fn parent_array_errors() {
        let cases: Vec<(&str, FormatError)> = vec![
            ("", syntax(1, 1, "missing vertex count")),
            ("x\n", syntax(1, 1, "expected a vertex count, got \"x\"")),
            ("0\n", semantic("a tree has at least one vertex")),
            ("3\n-1\n0\n", syntax(4, 1, "expected 3 parent lines, found 2")),
            ("2\n-1\n0\n7\n", syntax(4, 1, "unexpected extra line")),
            ("2\n-1\n-3\n", semantic("vertex 1: parent must be -1 or a vertex index, got -3")),
        ];
        for (input, want) in cases {
            assert_eq!(parse_tree(input, TreeFormat::ParentArray), Err(want), "input {input:?}");
        }
        // Parse-level integer error carries the token position.
        match parse_tree("2\n-1\n zz\n", TreeFormat::ParentArray) {
            Err(FormatError::SyntaxError { line: 3, column: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        // Structural problems surface as semantic errors.
        assert!(matches!(
            parse_tree("2\n-1\n-1\n", TreeFormat::ParentArray),
            Err(FormatError::SemanticError { .. })
        ));
        assert!(matches!(
            parse_tree("2\n-1\n5\n", TreeFormat::ParentArray),
            Err(FormatError::SemanticError { .. })
        ));
        assert!(matches!(
            parse_tree("3\n-1\n2\n1\n", TreeFormat::ParentArray),
            Err(FormatError::SemanticError { .. })
        ));
    }

    #[test]
    fn edge_list_errors() {
        for bad in [
            "3 0\n0 1\n",             // too few edges
            "3 0\n0 1\n0 2\n1 2\n",   // too many lines
            "3 0\n0 1\n1 1\n",        // self-loop
            "3 0\n0 1\n0 1\n",        // duplicate edge leaves vertex 2 unreachable
            "3 5\n0 1\n0 2\n",        // root out of range
            "3 0\n0 1\n0 9\n",        // endpoint out of range
            "0 0\n",                  // empty tree
        ] {
            assert!(matches!(
                parse_tree(bad, TreeFormat::EdgeList),
                Err(FormatError::SemanticError { .. }) | Err(FormatError::SyntaxError { .. })
            ), "{bad:?} should fail");
        }
        assert!(parse_tree("1 0\n", TreeFormat::EdgeList).is_ok());
    }

    #[test]
    fn json_errors() {
        let not_json = "{ nope";
        assert!(matches!(
            parse_tree(not_json, TreeFormat::Json),
            Err(FormatError::SyntaxError { .. })
        ));
        let wrong_kind = r#"{"kind":"coloring","version":"1","k":1,"class_of":[0]}"#;
        assert!(matches!(
            parse_tree(wrong_kind, TreeFormat::Json),
            Err(FormatError::SemanticError { .. })
        ));
        let bad_version = r#"{"kind":"tree","version":"99","n":1,"root":0,"parents":[null]}"#;
        assert!(matches!(parse_tree(bad_version, TreeFormat::Json), Err(FormatError::SemanticError { .. })));
        let wrong_len = r#"{"kind":"tree","version":"1","n":3,"root":0,"parents":[null,0]}"#;
        assert!(matches!(parse_tree(wrong_len, TreeFormat::Json), Err(FormatError::SemanticError { .. })));
        let wrong_root = r#"{"kind":"tree","version":"1","n":2,"root":1,"parents":[null,0]}"#;
        assert!(matches!(parse_tree(wrong_root, TreeFormat::Json), Err(FormatError::SemanticError { .. })));
        let missing = r#"{"kind":"tree","version":"1","n":1,"parents":[null]}"#;
        assert!(matches!(parse_tree(missing, TreeFormat::Json), Err(FormatError::SemanticError { .. })));
    }

    #[test]
    fn coloring_round_trip_and_validation() {
        let c = Coloring::from_class_ids(&[0, 1, 0, 2, 1]);
        let text = emit_coloring(&c);
        assert_eq!(parse_coloring(&text).unwrap(), c);
        // Non-canonical labels load as the same partition.
        let relabeled = r#"{"kind":"coloring","version":"1","k":3,"class_of":[2,0,2,1,0]}"#;
        assert_eq!(parse_coloring(relabeled).unwrap(), c);

        let out_of_range = r#"{"kind":"coloring","version":"1","k":2,"class_of":[0,5]}"#;
        assert!(matches!(parse_coloring(out_of_range), Err(FormatError::SemanticError { .. })));
        let unused_class = r#"{"kind":"coloring","version":"1","k":3,"class_of":[0,1,0]}"#;
        assert!(matches!(parse_coloring(unused_class), Err(FormatError::SemanticError { .. })));
        let empty = r#"{"kind":"coloring","version":"1","k":0,"class_of":[]}"#;
        assert!(matches!(parse_coloring(empty), Err(FormatError::SemanticError { .. })));
    }

    #[test]
    fn report_and_violation_lines() {
        let t = gen_perfect_per_level(&[2]).unwrap();
        let graph = t.to_graph();
        // Three classes on a star K_{1,2}: the root has same=1, need=2.
        let bad = Coloring::from_class_ids(&[0, 1, 2]);
        let report = verify_quorum(&graph, &bad).unwrap();
        assert!(!report.valid);
        let lines = violation_lines(&report);
        assert_eq!(lines, vec!["vertex 0: same=1 need=2"]);
        let text = emit_report(&report);
        let doc = parse_document(&text).unwrap();
        assert_eq!(doc.kind, DocKind::Report);
        assert_eq!(doc.payload["valid"], Value::Bool(false));
        assert_eq!(doc.payload["violations"], json!([0]));
        assert_eq!(doc.payload["per_vertex"][0]["need"], json!(2));
    }

    #[test]
    fn result_records_are_single_line_and_skip_unset_fields() {
        let mut rec = ResultRecord::new("solve");
        rec.n = Some(28);
        rec.psi_q = Some(15);
        rec.extra.insert("shape".into(), json!("levels:3,4,1"));
        let line = rec.to_json_line();
        assert!(!line.contains('\n'));
        let v: Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["kind"], json!("result"));
        assert_eq!(v["version"], json!(FORMAT_VERSION));
        assert_eq!(v["method"], json!("solve"));
        assert_eq!(v["psi_q"], json!(15));
        assert_eq!(v["shape"], json!("levels:3,4,1"));
        assert!(v.get("value").is_none());
        assert!(v.get("elapsed_ms").is_none());
    }

    #[test]
    fn dot_output_structure() {
        let t = sample_tree();
        let plain = emit_dot_tree(&t, None).unwrap();
        assert!(plain.starts_with("digraph tree {"));
        assert!(plain.contains("0 [label=\"v_{0,1}\"]"));
        assert!(plain.contains("3 [label=\"v_{2,1}\"]"));
        assert!(plain.contains("  0 -> 1;"));
        assert!(plain.trim_end().ends_with('}'));

        let c = Coloring::from_class_ids(&[0, 0, 1, 0, 2]);
        let colored = emit_dot_tree(&t, Some(&c)).unwrap();
        assert!(colored.contains("label=\"v_{0,1} / 0\""));
        assert!(colored.contains("fillcolor=\"lightblue\""));

        let mismatched = Coloring::from_class_ids(&[0, 0]);
        assert!(emit_dot_tree(&t, Some(&mismatched)).is_err());

        let graph = Graph::complete(3);
        let g = emit_dot_graph(&graph, Some(&Coloring::from_class_ids(&[0, 0, 0]))).unwrap();
        assert!(g.starts_with("graph g {"));
        assert!(g.contains("  0 -- 1;"));
        assert!(g.contains("  1 -- 2;"));
    }

    #[test]
    fn palette_rotates_past_named_colors() {
        assert_eq!(class_fill(0), "lightblue");
        assert_eq!(class_fill(23), "darkkhaki");
        let fill = class_fill(24);
        assert_eq!(fill, "0.0000 0.55 0.85");
        let fill = class_fill(25);
        assert!(fill.starts_with("0.38"), "{fill}");
        // All rotated hues stay in [0, 1).
        for class in 24..200 {
            let fill = class_fill(class);
            let hue: f64 = fill.split(' ').next().unwrap().parse().unwrap();
            assert!((0.0..1.0).contains(&hue));
        }
    }

    proptest! {
        /// emit ∘ parse is the identity for every format on random trees.
        #[test]
        fn formats_round_trip(n in 1usize..40, seed in 0u64..50) {
            let t = gen_random_tree(n, seed).unwrap();
            for format in [TreeFormat::ParentArray, TreeFormat::Json, TreeFormat::EdgeList] {
                let text = emit_tree(&t, format);
                prop_assert_eq!(&parse_tree(&text, format).unwrap(), &t);
            }
        }
    }

    #[test]
    fn format_names_round_trip() {
        for f in [TreeFormat::ParentArray, TreeFormat::Json, TreeFormat::EdgeList] {
            assert_eq!(f.to_string().parse::<TreeFormat>().unwrap(), f);
        }
        assert!("yaml".parse::<TreeFormat>().is_err());
    }
}
