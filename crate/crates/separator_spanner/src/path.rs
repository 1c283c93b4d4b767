//! Validation of base paths.

use graph_core::paths::shortest_paths_filtered;
use graph_core::{tol, WeightedGraph};

use crate::error::SeparatorError;

/// A path verified to be shortest, with its edge ids and prefix lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct BasePath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// `prefix[j]` is the length of the path up to `vertices[j]`.
    pub prefix: Vec<f64>,
}

impl BasePath {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Distance along the path between two positions.
    pub fn along(&self, a: usize, b: usize) -> f64 {
        (self.prefix[a] - self.prefix[b]).abs()
    }

    pub fn weight(&self) -> f64 {
        self.prefix.last().copied().unwrap_or(0.0)
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }
}

/// Put the endpoint with the smaller vertex id first.
pub fn oriented(path: &[usize]) -> Vec<usize> {
    let mut p = path.to_vec();
    if p.len() > 1 && p[p.len() - 1] < p[0] {
        p.reverse();
    }
    p
}

/// Lightest edge between `a` and `b` among those accepted by `keep`.
pub(crate) fn lightest_kept(g: &WeightedGraph, a: usize, b: usize, keep: &dyn Fn(usize) -> bool) -> Option<usize> {
    g.neighbors(a)
        .iter()
        .filter(|&&(x, id)| x == b && keep(id))
        .map(|&(_, id)| id)
        .min_by(|&x, &y| g.edge(x).w.total_cmp(&g.edge(y).w).then(x.cmp(&y)))
}

/// Check that `path` is a shortest path in the subgraph of edges accepted
/// by `keep`: one Dijkstra from its first vertex must reproduce every
/// prefix length.
pub fn check_shortest(
    g: &WeightedGraph,
    path: &[usize],
    keep: &dyn Fn(usize) -> bool,
) -> Result<BasePath, SeparatorError> {
    if path.is_empty() {
        return Err(SeparatorError::Input("empty path".into()));
    }
    for &v in path {
        g.check_vertex(v)?;
    }
    let mut edges = Vec::with_capacity(path.len() - 1);
    let mut prefix = vec![0.0];
    for w in path.windows(2) {
        let id = lightest_kept(g, w[0], w[1], keep)
            .ok_or_else(|| SeparatorError::Input(format!("no edge between {} and {}", w[0], w[1])))?;
        edges.push(id);
        prefix.push(prefix.last().unwrap() + g.edge(id).w);
    }
    let sp = shortest_paths_filtered(g, path[0], keep)?;
    for (j, &v) in path.iter().enumerate() {
        if !tol::approx_eq(sp.dist[v], prefix[j]) {
            return Err(SeparatorError::NotShortest(format!(
                "prefix to vertex {v} has length {} but the distance is {}",
                prefix[j], sp.dist[v]
            )));
        }
    }
    Ok(BasePath { vertices: path.to_vec(), edges, prefix })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detour_is_rejected() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.5)]).unwrap();
        assert!(check_shortest(&g, &[0, 1], &|_| true).is_ok());
        assert!(matches!(check_shortest(&g, &[0, 1, 2], &|_| true), Err(SeparatorError::NotShortest(_))));
        assert!(check_shortest(&g, &[0, 1, 2], &|id| id != 2).is_ok());
    }

    #[test]
    fn orientation_puts_smaller_endpoint_first() {
        assert_eq!(oriented(&[5, 3, 1]), vec![1, 3, 5]);
        assert_eq!(oriented(&[1, 3, 5]), vec![1, 3, 5]);
    }
}
