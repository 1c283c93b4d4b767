//! Spanner oracle for graph metrics on top of [`ell_close_spanner`].

use graph_core::par::{self, Exec};
use graph_core::{shortest_paths, GraphError, WeightedGraph};
use metric_oracles::{OracleError, OracleQuery, SpannerOracle};

use crate::ell_close::{ell_close_spanner, EllCloseOptions};
use crate::provider::SeparatorProvider;

/// Shortest paths between terminal pairs at distance at most `ell` that do
/// not pass through a third terminal.
pub fn terminal_demands(
    graph: &WeightedGraph,
    terminals: &[usize],
    ell: f64,
    exec: Exec,
) -> Result<Vec<Vec<usize>>, GraphError> {
    let mut is_term = vec![false; graph.n()];
    for &t in terminals {
        graph.check_vertex(t)?;
        is_term[t] = true;
    }
    let mut sorted = terminals.to_vec();
    sorted.sort_unstable();
    let per_source = par::map(exec, &sorted, |&a| {
        let sp = shortest_paths(graph, a).expect("checked vertex");
        sorted
            .iter()
            .filter(|&&b| b > a && sp.dist[b] <= ell)
            .filter_map(|&b| {
                let p = sp.path_to(b).expect("reachable");
                p[1..p.len() - 1].iter().all(|&v| !is_term[v]).then_some(p)
            })
            .collect::<Vec<_>>()
    });
    Ok(per_source.into_iter().flatten().collect())
}

pub struct SeparatorOracle<P> {
    graph: WeightedGraph,
    provider: P,
    options: EllCloseOptions,
}

impl<P: SeparatorProvider> SeparatorOracle<P> {
    pub fn new(graph: WeightedGraph, provider: P) -> Self {
        SeparatorOracle { graph, provider, options: EllCloseOptions::default() }
    }

    pub fn with_options(mut self, options: EllCloseOptions) -> Self {
        self.options = options;
        self
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }
}

impl<P: SeparatorProvider> SpannerOracle for SeparatorOracle<P> {
    fn name(&self) -> &str {
        "separator"
    }

    fn universe(&self) -> usize {
        self.graph.n()
    }

    fn distance(&self, a: usize, b: usize) -> f64 {
        shortest_paths(&self.graph, a).expect("vertex in graph").dist[b]
    }

    fn distances_from(&self, a: usize, targets: &[usize]) -> Vec<f64> {
        let d = shortest_paths(&self.graph, a).expect("vertex in graph").dist;
        targets.iter().map(|&b| d[b]).collect()
    }

    fn query(&self, q: &OracleQuery) -> Result<WeightedGraph, OracleError> {
        q.check_universe(self.graph.n())?;
        let demands = terminal_demands(&self.graph, &q.terminals, q.ell, self.options.exec)?;
        let opts = EllCloseOptions { verify: false, ..self.options };
        let out = ell_close_spanner(&self.graph, &q.terminals, &demands, q.ell, q.eps, &self.provider, opts)?;
        Ok(out.graph)
    }
}
