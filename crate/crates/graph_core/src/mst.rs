//! Minimum spanning trees of graphs and terminal metrics.

use crate::error::GraphError;
use crate::graph::{edge_order, UnionFind, WeightedGraph};
use crate::metric::TerminalMetric;

/// An edge of a terminal metric, by terminal index.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MetricEdge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Kruskal with the `(weight, smaller id, larger id)` order, then edge id.
/// Returns edge ids of a spanning tree.
pub fn minimum_spanning_tree(graph: &WeightedGraph) -> Result<Vec<usize>, GraphError> {
    let forest = minimum_spanning_forest(graph);
    if graph.n() > 1 && forest.len() + 1 != graph.n() {
        let comps = graph.components();
        return Err(GraphError::Disconnected(comps[0][0], comps[1][0]));
    }
    Ok(forest)
}

/// Kruskal without the connectivity requirement.
pub fn minimum_spanning_forest(graph: &WeightedGraph) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..graph.m()).collect();
    ids.sort_by(|&a, &b| edge_order(&graph.edge(a), &graph.edge(b)).then(a.cmp(&b)));
    let mut uf = UnionFind::new(graph.n());
    ids.into_iter()
        .filter(|&id| {
            let e = graph.edge(id);
            uf.union(e.u, e.v)
        })
        .collect()
}

/// MST of the complete terminal metric, same tie-break on terminal indices.
pub fn metric_mst(metric: &TerminalMetric) -> Result<Vec<MetricEdge>, GraphError> {
    let k = metric.k();
    let mut all = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let w = metric.d(i, j);
            if !w.is_finite() {
                return Err(GraphError::Disconnected(metric.terminals[i], metric.terminals[j]));
            }
            all.push(MetricEdge { i, j, w });
        }
    }
    all.sort_by(|a, b| a.w.total_cmp(&b.w).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)));
    let mut uf = UnionFind::new(k);
    Ok(all.into_iter().filter(|e| uf.union(e.i, e.j)).collect())
}
