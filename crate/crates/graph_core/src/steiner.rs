//! Steiner tree 2-approximation via the metric-completion MST.

use crate::error::GraphError;
use crate::graph::WeightedGraph;
use crate::metric::metric_completion;
use crate::mst::{metric_mst, minimum_spanning_forest};

/// Tree spanning `terminals` with weight at most twice the optimum.
///
/// The MST of the metric completion is decompressed through κ, cycles in the
/// union are removed by a spanning forest, and non-terminal leaves are
/// pruned repeatedly.
pub fn steiner_2approx(graph: &WeightedGraph, terminals: &[usize]) -> Result<WeightedGraph, GraphError> {
    let metric = metric_completion(graph, terminals)?;
    let mut ids: Vec<usize> = Vec::new();
    for e in metric_mst(&metric)? {
        ids.extend_from_slice(metric.kappa_edges(e.i, e.j));
    }
    let union = graph.edge_subgraph(ids.iter().copied());
    let forest = minimum_spanning_forest(&union);
    let tree = union.edge_subgraph(forest);
    Ok(prune_leaves(&tree, terminals))
}

/// Repeatedly delete edges hanging off non-terminal leaves.
pub fn prune_leaves(tree: &WeightedGraph, keep: &[usize]) -> WeightedGraph {
    let n = tree.n();
    let mut is_keep = vec![false; n];
    for &t in keep {
        is_keep[t] = true;
    }
    let mut alive = vec![true; tree.m()];
    let mut deg: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] == 1 && !is_keep[v]).collect();
    while let Some(v) = stack.pop() {
        if deg[v] != 1 {
            continue;
        }
        for &(u, id) in tree.neighbors(v) {
            if alive[id] {
                alive[id] = false;
                deg[v] -= 1;
                deg[u] -= 1;
                if deg[u] == 1 && !is_keep[u] {
                    stack.push(u);
                }
                break;
            }
        }
    }
    tree.edge_subgraph((0..tree.m()).filter(|&id| alive[id]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_with_all_terminals_is_itself() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 2.0), (1, 3, 3.0)]).unwrap();
        let s = steiner_2approx(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(s.m(), 3);
        assert_eq!(s.total_weight(), 6.0);
    }

    #[test]
    fn star_leaves() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        let s = steiner_2approx(&g, &[1, 2, 3]).unwrap();
        assert_eq!(s.total_weight(), 3.0);
        assert!(s.is_forest());
    }

    #[test]
    fn prunes_dangling_paths() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let p = prune_leaves(&g, &[0, 2]);
        assert_eq!(p.m(), 2);
    }
}
