//! Shortest-path separator families and two heuristic providers.

use serde::{Deserialize, Serialize};

use graph_core::{shortest_paths, WeightedGraph};

use crate::error::SeparatorError;
use crate::path::check_shortest;

/// Ordered sets of paths. Paths in set `i` are shortest in the graph with
/// the vertices of all earlier sets removed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SeparatorFamily {
    pub sets: Vec<Vec<Vec<usize>>>,
}

impl SeparatorFamily {
    pub fn single(paths: Vec<Vec<usize>>) -> Self {
        SeparatorFamily { sets: vec![paths] }
    }

    /// Indicator of vertices covered by some path.
    pub fn covered(&self, n: usize) -> Vec<bool> {
        let mut out = vec![false; n];
        for v in self.sets.iter().flatten().flatten() {
            out[*v] = true;
        }
        out
    }

    pub fn path_count(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    pub fn vertex_count(&self, n: usize) -> usize {
        self.covered(n).iter().filter(|&&c| c).count()
    }

    /// Largest component left after removing the family, as a fraction of
    /// the vertex count.
    pub fn balance(&self, g: &WeightedGraph) -> f64 {
        if g.n() == 0 {
            return 0.0;
        }
        let removed = self.covered(g.n());
        largest_component(g, &removed) as f64 / g.n() as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }

    /// Check every path is shortest in its residual graph.
    pub fn verify(&self, g: &WeightedGraph) -> Result<(), SeparatorError> {
        let mut removed = vec![false; g.n()];
        for set in &self.sets {
            let alive = |id: usize| {
                let e = g.edge(id);
                !removed[e.u] && !removed[e.v]
            };
            for path in set {
                if let Some(&v) = path.iter().find(|&&v| v >= g.n() || removed[v]) {
                    return Err(SeparatorError::NotShortest(format!("separator path uses removed vertex {v}")));
                }
                check_shortest(g, path, &alive)?;
            }
            for v in set.iter().flatten() {
                removed[*v] = true;
            }
        }
        Ok(())
    }
}

/// Size of the largest component of `g` after deleting `removed` vertices.
pub fn largest_component(g: &WeightedGraph, removed: &[bool]) -> usize {
    let mut seen = removed.to_vec();
    let mut best = 0;
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &(y, _) in g.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        best = best.max(size);
    }
    best
}

pub trait SeparatorProvider: Sync {
    fn name(&self) -> &str;
    /// Separator family for a connected graph.
    fn family(&self, g: &WeightedGraph) -> SeparatorFamily;
}

/// Vertex whose removal leaves the smallest largest component (smallest id
/// on ties). On a tree this is a centroid.
pub fn centroid(g: &WeightedGraph) -> usize {
    let mut removed = vec![false; g.n()];
    let mut best = (usize::MAX, 0);
    for v in 0..g.n() {
        removed[v] = true;
        let size = largest_component(g, &removed);
        removed[v] = false;
        if size < best.0 {
            best = (size, v);
        }
    }
    best.1
}

/// A single one-vertex path at the centroid.
#[derive(Debug, Clone, Copy, Default)]
pub struct CentroidProvider;

impl SeparatorProvider for CentroidProvider {
    fn name(&self) -> &str {
        "centroid"
    }

    fn family(&self, g: &WeightedGraph) -> SeparatorFamily {
        if g.n() == 0 {
            return SeparatorFamily::default();
        }
        SeparatorFamily::single(vec![vec![centroid(g)]])
    }
}

/// Fundamental-cycle heuristic on a shortest-path tree rooted at vertex 0.
///
/// Every non-tree edge `uv` proposes the two root paths to `u` and `v`
/// (the second without the shared prefix). The proposal with the best
/// balance wins, then fewer separator vertices, then the smaller edge id.
/// Without non-tree edges the root path to the centroid is used.
#[derive(Debug, Clone, Copy)]
pub struct SptCycleProvider {
    /// Upper bound on the number of non-tree edges scored; larger sets are
    /// sampled at even spacing.
    pub max_candidates: usize,
}

impl Default for SptCycleProvider {
    fn default() -> Self {
        SptCycleProvider { max_candidates: 256 }
    }
}

impl SeparatorProvider for SptCycleProvider {
    fn name(&self) -> &str {
        "spt-cycle"
    }

    fn family(&self, g: &WeightedGraph) -> SeparatorFamily {
        if g.n() == 0 {
            return SeparatorFamily::default();
        }
        let sp = shortest_paths(g, 0).expect("vertex 0 exists");
        let mut tree = vec![false; g.m()];
        for &(_, e) in sp.parent.iter().flatten() {
            tree[e] = true;
        }
        let non_tree: Vec<usize> = (0..g.m()).filter(|&e| !tree[e]).collect();
        if non_tree.is_empty() {
            let c = centroid(g);
            return SeparatorFamily::single(vec![sp.path_to(c).expect("connected graph")]);
        }
        let step = non_tree.len().div_ceil(self.max_candidates.max(1));
        let mut best: Option<((usize, usize, usize), Vec<Vec<usize>>)> = None;
        let mut removed = vec![false; g.n()];
        for &e in non_tree.iter().step_by(step) {
            let edge = g.edge(e);
            let pu = sp.path_to(edge.u).expect("connected graph");
            let pv = sp.path_to(edge.v).expect("connected graph");
            let common = pu.iter().zip(&pv).take_while(|(a, b)| a == b).count();
            let mut paths = vec![pu];
            if common < pv.len() {
                paths.push(pv[common..].to_vec());
            }
            for v in paths.iter().flatten() {
                removed[*v] = true;
            }
            let size = paths.iter().map(Vec::len).sum::<usize>();
            let key = (largest_component(g, &removed), size, e);
            for v in paths.iter().flatten() {
                removed[*v] = false;
            }
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, paths));
            }
        }
        SeparatorFamily::single(best.expect("at least one candidate").1)
    }
}
