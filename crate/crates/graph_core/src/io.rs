//! File formats: graph JSON, whitespace edge lists, terminal lists, DOT.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::GraphError;
use crate::graph::WeightedGraph;

/// `{"vertices": N, "edges": [[u, v, w], ...], "terminals": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub terminals: Vec<usize>,
}

impl GraphJson {
    pub fn from_graph(graph: &WeightedGraph, terminals: &[usize]) -> Self {
        GraphJson {
            vertices: graph.n(),
            edges: graph.edges().iter().map(|e| (e.u, e.v, e.w)).collect(),
            terminals: terminals.to_vec(),
        }
    }

    /// Build the graph, accepting parallel edges only when `multigraph` is set.
    pub fn to_graph(&self, multigraph: bool) -> Result<(WeightedGraph, Vec<usize>), GraphError> {
        let mut g = if multigraph { WeightedGraph::new_multigraph(self.vertices) } else { WeightedGraph::new(self.vertices) };
        for &(u, v, w) in &self.edges {
            g.add_edge(u, v, w)?;
        }
        for &t in &self.terminals {
            g.check_vertex(t)?;
        }
        Ok((g, self.terminals.clone()))
    }
}

pub fn parse_graph_json(text: &str) -> Result<(WeightedGraph, Vec<usize>), GraphError> {
    let parsed: GraphJson = serde_json::from_str(text)?;
    parsed.to_graph(false)
}

pub fn read_graph_json(path: &Path) -> Result<(WeightedGraph, Vec<usize>), GraphError> {
    parse_graph_json(&std::fs::read_to_string(path)?)
}

pub fn graph_json_string(graph: &WeightedGraph, terminals: &[usize]) -> String {
    let mut v = serde_json::to_value(GraphJson::from_graph(graph, terminals)).expect("plain data");
    round_value(&mut v);
    serde_json::to_string(&v).expect("plain data")
}

/// Whitespace edge list: one `u v w` triple per line. Blank lines and lines
/// starting with `#` are ignored. The vertex count is one past the largest id
/// unless `vertices` is given.
pub fn parse_edge_list(text: &str, vertices: Option<usize>) -> Result<WeightedGraph, GraphError> {
    let mut triples = Vec::new();
    let mut max_id = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(GraphError::Parse(format!("line {}: expected `u v w`", lineno + 1)));
        }
        let bad = |what: &str| GraphError::Parse(format!("line {}: bad {what}", lineno + 1));
        let u: usize = parts[0].parse().map_err(|_| bad("vertex"))?;
        let v: usize = parts[1].parse().map_err(|_| bad("vertex"))?;
        let w: f64 = parts[2].parse().map_err(|_| bad("weight"))?;
        max_id = max_id.max(u).max(v);
        triples.push((u, v, w));
    }
    let n = vertices.unwrap_or(if triples.is_empty() { 0 } else { max_id + 1 });
    WeightedGraph::from_edges(n, &triples)
}

/// Terminal file: whitespace- or newline-separated vertex ids.
pub fn parse_terminals(text: &str) -> Result<Vec<usize>, GraphError> {
    text.split_whitespace()
        .filter(|tok| !tok.starts_with('#'))
        .map(|tok| tok.parse().map_err(|_| GraphError::Parse(format!("bad terminal id `{tok}`"))))
        .collect()
}

/// Graphviz rendering; terminals are drawn as boxes.
pub fn to_dot(graph: &WeightedGraph, terminals: &[usize]) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..graph.n() {
        let shape = if terminals.contains(&v) { "box" } else { "circle" };
        let _ = writeln!(out, "  {v} [shape={shape}];");
    }
    for e in graph.edges() {
        let _ = writeln!(out, "  {} -- {} [label=\"{}\"];", e.u, e.v, fmt9(e.w));
    }
    out.push_str("}\n");
    out
}

/// Round to nine decimal places.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Format with at most nine decimals and no trailing zeros.
pub fn fmt9(x: f64) -> String {
    let s = format!("{:.9}", round9(x));
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Round every float in a JSON tree to nine decimals. Non-finite numbers
/// cannot appear in JSON and are replaced by the string `"inf"`/`"nan"`.
pub fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let x = round9(n.as_f64().unwrap());
                *v = serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null);
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}
