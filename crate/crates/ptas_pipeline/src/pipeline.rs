use graph_core::{metric_completion, metric_mst, steiner_2approx, WeightedGraph};
use serde::Serialize;
use subset_spanner::{build_subset_spanner, OracleFactory, SubsetOptions};
use treewidth_dp::{held_karp, make_nice, subset_tsp_dp, DpOptions, Heuristic, TreeDecomposition};

use crate::lift::{check_closed_walk, lift, multiset_weight, MatchingKind, Multiset};
use crate::partition::{contract, partition_spanner, Partitioner};
use crate::PtasError;

#[derive(Clone, Debug)]
pub struct PtasOptions {
    /// Stretch parameter handed to the subset spanner (below 1/29).
    pub spanner_eps: f64,
    pub subset: SubsetOptions,
    pub dp: DpOptions,
    /// Largest terminal count for which the lower bound is the exact
    /// Held–Karp optimum.
    pub exact_lower_bound_limit: usize,
}

impl Default for PtasOptions {
    fn default() -> Self {
        PtasOptions { spanner_eps: 0.03, subset: SubsetOptions::default(), dp: DpOptions::default(), exact_lower_bound_limit: 12 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PtasReport {
    pub partitioner: String,
    pub spanner_lightness: f64,
    pub spanner_weight: f64,
    pub opt_estimate: f64,
    pub g: usize,
    pub parts: usize,
    pub w_x: f64,
    pub measured_width: usize,
    /// True when `g = 1` and the DP ran on the spanner itself.
    pub uncontracted: bool,
    pub contracted_vertices: usize,
    pub absorbed_terminals: usize,
    pub contracted_tour_weight: f64,
    pub odd_vertices: usize,
    pub matching: MatchingKind,
    pub tour_weight: f64,
    pub lower_bound: f64,
    pub lower_bound_exact: bool,
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct PtasResult {
    pub weight: f64,
    /// Multiplicities keyed by edge id of the input graph.
    pub edges: Multiset,
    pub report: PtasReport,
}

impl PtasResult {
    pub fn to_json(&self, graph: &WeightedGraph) -> serde_json::Value {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|(&id, &m)| {
                let e = graph.edge(id);
                serde_json::json!([e.u, e.v, m])
            })
            .collect();
        let mut v = serde_json::to_value(&self.report).expect("report serializes");
        v["edges"] = serde_json::Value::Array(edges);
        v
    }
}

/// Spanner, contraction of the lightest part, exact DP on the contracted
/// graph, then lifting back to a closed walk of the input graph.
pub fn run_ptas(
    graph: &WeightedGraph,
    terminals: &[usize],
    eps: f64,
    oracle: &dyn OracleFactory,
    partitioner: &dyn Partitioner,
    opts: &PtasOptions,
) -> Result<PtasResult, PtasError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(PtasError::Input(format!("epsilon must be positive, got {eps}")));
    }
    let mut t = terminals.to_vec();
    t.sort_unstable();
    t.dedup();
    if t.is_empty() {
        return Err(PtasError::Input("no terminals".into()));
    }
    let spanner = build_subset_spanner(graph, &t, oracle, opts.spanner_eps, &opts.subset)?;
    let mut s_ids = spanner.edge_ids.clone();
    s_ids.sort_unstable();
    s_ids.dedup();
    let s = graph.edge_subgraph(s_ids.iter().copied());
    let opt_estimate = 2.0 * steiner_2approx(graph, &t)?.total_weight();
    let g = if opt_estimate > 0.0 { ((s.total_weight() / (eps * opt_estimate)).ceil() as usize).max(1) } else { 1 };
    let part = partition_spanner(&s, g, partitioner);
    let uncontracted = g == 1;
    let x: Vec<usize> = if uncontracted { Vec::new() } else { part.chosen_edges().to_vec() };
    let c = contract(&s, &x, &t);
    let td = TreeDecomposition::heuristic(&c.graph, Heuristic::MinFill);
    if td.width() > opts.dp.max_width {
        return Err(PtasError::TooWide { width: td.width(), cap: opts.dp.max_width });
    }
    let nice = make_nice(&td, &c.graph)?;
    let sol = subset_tsp_dp(&c.graph, &c.terminals, &nice, &opts.dp)?;
    let mut tour = Multiset::new();
    for &(id, m) in &sol.edges {
        *tour.entry(c.origin[id]).or_insert(0) += m;
    }
    let lifted = lift(&s, &x, &c.super_of, &tour, &t)?;
    check_closed_walk(&s, &lifted.edges, &t).map_err(|m| PtasError::Internal(format!("lifted walk is invalid: {m}")))?;
    let edges: Multiset = lifted.edges.iter().map(|(&id, &m)| (s_ids[id], m)).collect();
    let weight = multiset_weight(graph, &edges);
    let (lower_bound, lower_bound_exact) = lower_bound(graph, &t, opts.exact_lower_bound_limit)?;
    let ratio = if lower_bound > 0.0 { weight / lower_bound } else { 1.0 };
    let report = PtasReport {
        partitioner: partitioner.name().to_string(),
        spanner_lightness: spanner.diagnostics.lightness,
        spanner_weight: s.total_weight(),
        opt_estimate,
        g,
        parts: part.g,
        w_x: if uncontracted { 0.0 } else { part.weight_x },
        measured_width: td.width(),
        uncontracted,
        contracted_vertices: c.graph.n(),
        absorbed_terminals: c.absorbed_terminals,
        contracted_tour_weight: sol.weight,
        odd_vertices: lifted.odd_vertices,
        matching: lifted.matching,
        tour_weight: weight,
        lower_bound,
        lower_bound_exact,
        ratio,
    };
    Ok(PtasResult { weight, edges, report })
}

/// Exact optimum for few terminals, otherwise the larger of the terminal
/// MST weight and twice the largest terminal distance.
pub fn lower_bound(graph: &WeightedGraph, t: &[usize], exact_limit: usize) -> Result<(f64, bool), PtasError> {
    if t.len() <= exact_limit {
        return Ok((held_karp(graph, t)?, true));
    }
    let m = metric_completion(graph, t)?;
    let mst: f64 = metric_mst(&m)?.iter().map(|e| e.w).sum();
    let mut far: f64 = 0.0;
    for i in 0..m.k() {
        for j in i + 1..m.k() {
            far = far.max(m.d(i, j));
        }
    }
    Ok((mst.max(2.0 * far), false))
}
