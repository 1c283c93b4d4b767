//! Metric completion over a terminal set with witness paths.

use crate::error::GraphError;
use crate::graph::WeightedGraph;
use crate::par::{self, Exec};
use crate::paths::shortest_paths;

/// Complete graph on `terminals` weighted by graph distances, with one
/// shortest path per pair (the map κ).
#[derive(Debug, Clone)]
pub struct TerminalMetric {
    pub terminals: Vec<usize>,
    pub dist: Vec<Vec<f64>>,
    /// Indexed by `pair_index(i, j)` for `i < j`: `(vertices, edge ids)` of a
    /// shortest path from `terminals[i]` to `terminals[j]`.
    kappa: Vec<(Vec<usize>, Vec<usize>)>,
}

impl TerminalMetric {
    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let k = self.k();
        a * k - a * (a + 1) / 2 + (b - a - 1)
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    /// Vertex sequence of κ(i, j), oriented from terminal `i` to terminal `j`.
    /// Empty when `i == j`.
    pub fn kappa(&self, i: usize, j: usize) -> Vec<usize> {
        if i == j {
            return Vec::new();
        }
        let mut p = self.kappa[self.pair_index(i, j)].0.clone();
        if i > j {
            p.reverse();
        }
        p
    }

    /// Edge ids of κ(i, j) in the source graph.
    pub fn kappa_edges(&self, i: usize, j: usize) -> &[usize] {
        if i == j {
            return &[];
        }
        &self.kappa[self.pair_index(i, j)].1
    }

    /// Position of a graph vertex in the terminal list.
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.terminals.iter().position(|&t| t == v)
    }

    /// Metric restricted to a subset of terminal indices (in the given order).
    pub fn restrict(&self, idx: &[usize]) -> TerminalMetric {
        let terminals: Vec<usize> = idx.iter().map(|&i| self.terminals[i]).collect();
        let dist: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| self.dist[i][j]).collect()).collect();
        let k = idx.len();
        let mut kappa = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for a in 0..k {
            for b in a + 1..k {
                let (i, j) = (idx[a], idx[b]);
                kappa.push((self.kappa(i, j), self.kappa_edges(i, j).to_vec()));
            }
        }
        TerminalMetric { terminals, dist, kappa }
    }
}

/// Compute `d_G` between all terminal pairs and one witness path per pair.
///
/// For `i < j` the entry and its κ-path come from the search rooted at
/// `terminals[i]`, so the path weight summed from `terminals[i]` equals the
/// entry bit for bit, and the matrix is exactly symmetric.
pub fn metric_completion(graph: &WeightedGraph, terminals: &[usize]) -> Result<TerminalMetric, GraphError> {
    metric_completion_with(graph, terminals, Exec::Parallel)
}

pub fn metric_completion_with(
    graph: &WeightedGraph,
    terminals: &[usize],
    exec: Exec,
) -> Result<TerminalMetric, GraphError> {
    for &t in terminals {
        graph.check_vertex(t)?;
    }
    for (i, &t) in terminals.iter().enumerate() {
        if terminals[..i].contains(&t) {
            return Err(GraphError::Invalid(format!("duplicate terminal {t}")));
        }
    }
    let k = terminals.len();
    let searches = par::map(exec, terminals, |&t| shortest_paths(graph, t).expect("checked vertex"));
    let mut dist = vec![vec![0.0; k]; k];
    let mut kappa = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let sp = &searches[i];
            let t = terminals[j];
            if !sp.reachable(t) {
                return Err(GraphError::Disconnected(terminals[i], t));
            }
            dist[i][j] = sp.dist[t];
            dist[j][i] = sp.dist[t];
            kappa.push((sp.path_to(t).unwrap(), sp.edge_path_to(t).unwrap()));
        }
    }
    Ok(TerminalMetric { terminals: terminals.to_vec(), dist, kappa })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_completion() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let m = metric_completion(&g, &[0, 2]).unwrap();
        assert_eq!(m.d(0, 1), 2.0);
        assert_eq!(m.kappa(0, 1), vec![0, 1, 2]);
        assert_eq!(m.kappa(1, 0), vec![2, 1, 0]);
        assert_eq!(m.kappa_edges(0, 1), &[0, 1]);
    }

    #[test]
    fn single_terminal() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let m = metric_completion(&g, &[1]).unwrap();
        assert_eq!(m.dist, vec![vec![0.0]]);
        assert!(m.kappa(0, 0).is_empty());
    }

    #[test]
    fn disconnected_pair_is_named() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(metric_completion(&g, &[0, 2]).unwrap_err(), GraphError::Disconnected(0, 2));
    }

    #[test]
    fn restrict_keeps_paths() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let m = metric_completion(&g, &[0, 1, 3]).unwrap();
        let r = m.restrict(&[2, 0]);
        assert_eq!(r.terminals, vec![3, 0]);
        assert_eq!(r.d(0, 1), 3.0);
        assert_eq!(r.kappa(0, 1), vec![3, 2, 1, 0]);
    }
}
