//! Single-source shortest paths (Dijkstra) with deterministic tie-breaking.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::GraphError;
use crate::graph::WeightedGraph;

/// Result of a shortest-path computation from one or more sources.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub dist: Vec<f64>,
    /// `(previous vertex, edge id)` on the chosen shortest path.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl ShortestPaths {
    pub fn reachable(&self, v: usize) -> bool {
        self.dist[v].is_finite()
    }

    /// Vertex sequence from the source that reached `t`, ending at `t`.
    pub fn path_to(&self, t: usize) -> Option<Vec<usize>> {
        if !self.reachable(t) {
            return None;
        }
        let mut out = vec![t];
        let mut cur = t;
        while let Some((p, _)) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out.reverse();
        Some(out)
    }

    /// Edge ids along [`path_to`](Self::path_to), in path order.
    pub fn edge_path_to(&self, t: usize) -> Option<Vec<usize>> {
        if !self.reachable(t) {
            return None;
        }
        let mut out = Vec::new();
        let mut cur = t;
        while let Some((p, e)) = self.parent[cur] {
            out.push(e);
            cur = p;
        }
        out.reverse();
        Some(out)
    }
}

#[derive(PartialEq)]
struct Item {
    d: f64,
    v: usize,
}

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.d.total_cmp(&self.d).then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `source`. Unreachable vertices get `f64::INFINITY`.
///
/// Among equally short paths the predecessor with the smaller vertex id wins
/// (then the smaller edge id), so the parent map is deterministic.
pub fn shortest_paths(graph: &WeightedGraph, source: usize) -> Result<ShortestPaths, GraphError> {
    graph.check_vertex(source)?;
    Ok(run(graph, &[source], |_| true, None))
}

/// Dijkstra restricted to edges accepted by `keep_edge`.
pub fn shortest_paths_filtered(
    graph: &WeightedGraph,
    source: usize,
    keep_edge: impl Fn(usize) -> bool,
) -> Result<ShortestPaths, GraphError> {
    graph.check_vertex(source)?;
    Ok(run(graph, &[source], keep_edge, None))
}

/// Dijkstra from a set of sources (all at distance zero).
pub fn multi_source(
    graph: &WeightedGraph,
    sources: &[usize],
    keep_edge: impl Fn(usize) -> bool,
) -> Result<ShortestPaths, GraphError> {
    for &s in sources {
        graph.check_vertex(s)?;
    }
    Ok(run(graph, sources, keep_edge, None))
}

/// Shortest distance from `s` to `t`, abandoning the search once every
/// remaining label exceeds `cutoff`. Returns infinity when `t` is farther.
pub fn bounded_distance(
    graph: &WeightedGraph,
    s: usize,
    t: usize,
    cutoff: f64,
    keep_edge: impl Fn(usize) -> bool,
) -> f64 {
    let sp = run(graph, &[s], keep_edge, Some((t, cutoff)));
    sp.dist[t]
}

fn run(
    graph: &WeightedGraph,
    sources: &[usize],
    keep_edge: impl Fn(usize) -> bool,
    stop: Option<(usize, f64)>,
) -> ShortestPaths {
    let n = graph.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        if dist[s] > 0.0 {
            dist[s] = 0.0;
            heap.push(Item { d: 0.0, v: s });
        }
    }
    while let Some(Item { d, v }) = heap.pop() {
        if done[v] || d > dist[v] {
            continue;
        }
        if let Some((t, cutoff)) = stop {
            if d > cutoff {
                dist[t] = f64::INFINITY;
                break;
            }
            if v == t {
                break;
            }
        }
        done[v] = true;
        for &(u, id) in graph.neighbors(v) {
            if done[u] || !keep_edge(id) {
                continue;
            }
            let nd = d + graph.edge(id).w;
            let better = match nd.total_cmp(&dist[u]) {
                Ordering::Less => true,
                Ordering::Equal => match parent[u] {
                    Some((pv, pe)) => (v, id) < (pv, pe),
                    None => false,
                },
                Ordering::Greater => false,
            };
            if better {
                dist[u] = nd;
                parent[u] = Some((v, id));
                heap.push(Item { d: nd, v: u });
            }
        }
    }
    ShortestPaths { dist, parent }
}

/// Total weight of the edges along a vertex sequence, using the lightest
/// edge between consecutive vertices. `None` if a step has no edge.
pub fn path_weight(graph: &WeightedGraph, path: &[usize]) -> Option<f64> {
    let mut total = 0.0;
    for w in path.windows(2) {
        total += graph.edge(graph.edge_between(w[0], w[1])?).w;
    }
    Some(total)
}

/// Edge ids (lightest per step) along a vertex sequence.
pub fn path_edges(graph: &WeightedGraph, path: &[usize]) -> Option<Vec<usize>> {
    path.windows(2).map(|w| graph.edge_between(w[0], w[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_prefers_two_hops() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap();
        let sp = shortest_paths(&g, 0).unwrap();
        assert_eq!(sp.dist[2], 2.0);
        assert_eq!(sp.path_to(2).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn isolated_source() {
        let g = WeightedGraph::new(1);
        let sp = shortest_paths(&g, 0).unwrap();
        assert_eq!(sp.dist, vec![0.0]);
        assert!(shortest_paths(&g, 1).is_err());
    }

    #[test]
    fn unreachable_is_infinite() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        let sp = shortest_paths(&g, 0).unwrap();
        assert!(sp.dist[2].is_infinite());
        assert!(sp.path_to(2).is_none());
    }

    #[test]
    fn ties_prefer_smaller_predecessor() {
        // 0 -> {1,2} -> 3 with equal lengths: parent of 3 must be 1.
        let g = WeightedGraph::from_edges(4, &[(0, 2, 1.0), (0, 1, 1.0), (2, 3, 1.0), (1, 3, 1.0)]).unwrap();
        let sp = shortest_paths(&g, 0).unwrap();
        assert_eq!(sp.path_to(3).unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn bounded_search_respects_cutoff() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(bounded_distance(&g, 0, 2, 5.0, |_| true), 2.0);
        assert!(bounded_distance(&g, 0, 2, 1.5, |_| true).is_infinite());
    }
}
