//! Spanner oracles from subset spanner algorithms.

use graph_core::graph::UnionFind;
use graph_core::{metric_completion, metric_mst, shortest_paths, WeightedGraph};
use metric_oracles::{OracleError, OracleQuery, SpannerOracle};

use crate::error::SubsetError;

/// Answer `query` with a subset spanner algorithm.
///
/// The MST of the query terminals' metric loses every edge longer than `ℓ`;
/// the algorithm runs once per remaining component with at least two
/// terminals, and the answer is the union. Terminals in different components
/// are farther apart than `ℓ`, so nothing in the window is lost.
pub fn oracle_from_subset_spanner<A>(
    algorithm: A,
    graph: &WeightedGraph,
    query: &OracleQuery,
) -> Result<WeightedGraph, SubsetError>
where
    A: Fn(&WeightedGraph, &[usize]) -> Result<WeightedGraph, SubsetError>,
{
    query.check_universe(graph.n()).map_err(|e| SubsetError::Input(e.to_string()))?;
    let metric = metric_completion(graph, &query.terminals)?;
    let k = metric.k();
    let mut uf = UnionFind::new(k);
    for e in metric_mst(&metric)? {
        if e.w <= query.ell {
            uf.union(e.i, e.j);
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..k {
        let r = uf.find(i);
        groups[r].push(metric.terminals[i]);
    }
    let mut ids = Vec::new();
    for part in groups.into_iter().filter(|p| p.len() >= 2) {
        let sub = algorithm(graph, &part)?;
        ids.extend(graph.embed_subgraph(&sub)?);
    }
    ids.sort_unstable();
    ids.dedup();
    Ok(graph.edge_subgraph(ids))
}

/// A [`SpannerOracle`] over a graph backed by a subset spanner algorithm.
pub struct ConverseOracle<A> {
    graph: WeightedGraph,
    algorithm: A,
}

impl<A> ConverseOracle<A>
where
    A: Fn(&WeightedGraph, &[usize]) -> Result<WeightedGraph, SubsetError> + Sync,
{
    pub fn new(graph: WeightedGraph, algorithm: A) -> Self {
        ConverseOracle { graph, algorithm }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }
}

impl<A> SpannerOracle for ConverseOracle<A>
where
    A: Fn(&WeightedGraph, &[usize]) -> Result<WeightedGraph, SubsetError> + Sync,
{
    fn name(&self) -> &str {
        "converse"
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
        Ok(oracle_from_subset_spanner(&self.algorithm, &self.graph, q)?)
    }
}
