//! The [`WeightedGraph`] type.

use std::collections::{BTreeSet, HashMap};

use crate::error::GraphError;

/// An undirected edge. `u <= v` is not enforced; use [`Edge::key`] for an
/// orientation-free identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    /// Deterministic total order: weight, then smaller endpoint, then larger.
    pub fn tie_key(&self) -> (f64, usize, usize) {
        let (a, b) = self.key();
        (self.w, a, b)
    }
}

/// Compare two edges by `(weight, smaller id, larger id)`.
pub fn edge_order(a: &Edge, b: &Edge) -> std::cmp::Ordering {
    let (wa, a0, a1) = a.tie_key();
    let (wb, b0, b1) = b.tie_key();
    wa.total_cmp(&wb).then(a0.cmp(&b0)).then(a1.cmp(&b1))
}

/// Undirected graph on vertices `0..n` with strictly positive finite weights.
///
/// In simple mode a second edge between the same endpoints is rejected; in
/// multigraph mode parallel edges are kept with their own ids.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
    multigraph: bool,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph { n, edges: Vec::new(), adj: vec![Vec::new(); n], multigraph: false }
    }

    pub fn new_multigraph(n: usize) -> Self {
        WeightedGraph { multigraph: true, ..Self::new(n) }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let mut g = Self::new(n);
        for &(u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn is_multigraph(&self) -> bool {
        self.multigraph
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    /// `(neighbor, edge id)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<usize, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(GraphError::BadWeight { u, v, w });
        }
        if !self.multigraph && self.edge_between(u, v).is_some() {
            return Err(GraphError::ParallelEdge(u, v));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u, v, w });
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        Ok(id)
    }

    /// Lightest edge between `u` and `v`, ties broken by smaller id.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let (small, other) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[small]
            .iter()
            .filter(|&&(x, _)| x == other)
            .map(|&(_, id)| id)
            .min_by(|&a, &b| self.edges[a].w.total_cmp(&self.edges[b].w).then(a.cmp(&b)))
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Graph on the same vertex set keeping only the listed edges
    /// (duplicates in `ids` are ignored).
    pub fn edge_subgraph(&self, ids: impl IntoIterator<Item = usize>) -> WeightedGraph {
        let set: BTreeSet<usize> = ids.into_iter().collect();
        let mut g = WeightedGraph { n: self.n, edges: Vec::new(), adj: vec![Vec::new(); self.n], multigraph: self.multigraph };
        for id in set {
            let e = self.edges[id];
            let nid = g.edges.len();
            g.edges.push(e);
            g.adj[e.u].push((e.v, nid));
            g.adj[e.v].push((e.u, nid));
        }
        g
    }

    /// Map each edge of `sub` to an edge id of `self` with the same endpoints
    /// and weight. Fails if some edge of `sub` has no counterpart.
    pub fn embed_subgraph(&self, sub: &WeightedGraph) -> Result<Vec<usize>, GraphError> {
        if sub.n != self.n {
            return Err(GraphError::NotSubgraph(format!(
                "vertex count {} differs from {}",
                sub.n, self.n
            )));
        }
        let mut by_key: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (id, e) in self.edges.iter().enumerate() {
            by_key.entry(e.key()).or_default().push(id);
        }
        let mut used: HashMap<usize, usize> = HashMap::new();
        let mut out = Vec::with_capacity(sub.m());
        for e in &sub.edges {
            let cands = by_key.get(&e.key()).ok_or_else(|| {
                GraphError::NotSubgraph(format!("edge ({}, {}) not present", e.u, e.v))
            })?;
            let hit = cands
                .iter()
                .copied()
                .find(|&id| crate::tol::approx_eq(self.edges[id].w, e.w) && used.get(&id).is_none())
                .or_else(|| cands.iter().copied().find(|&id| crate::tol::approx_eq(self.edges[id].w, e.w)));
            match hit {
                Some(id) => {
                    *used.entry(id).or_default() += 1;
                    out.push(id);
                }
                None => {
                    return Err(GraphError::NotSubgraph(format!(
                        "edge ({}, {}) weight {} differs from host",
                        e.u, e.v, e.w
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Union of edge sets of two graphs on the same vertex set. Edges with
    /// the same endpoints and weight are merged.
    pub fn union(&self, other: &WeightedGraph) -> WeightedGraph {
        let mut out = self.clone();
        out.absorb(other);
        out
    }

    /// Add every edge of `other` not already present (same endpoints and weight).
    pub fn absorb(&mut self, other: &WeightedGraph) {
        for e in &other.edges {
            let present = self.adj[e.u]
                .iter()
                .any(|&(x, id)| x == e.v && self.edges[id].w == e.w);
            if !present {
                let id = self.edges.len();
                self.edges.push(*e);
                self.adj[e.u].push((e.v, id));
                self.adj[e.v].push((e.u, id));
            }
        }
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut stack = vec![s];
            comp[s] = c;
            let mut members = Vec::new();
            while let Some(x) = stack.pop() {
                members.push(x);
                for &(y, _) in &self.adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = c;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Vertices with at least one incident edge.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !self.adj[v].is_empty()).collect()
    }

    /// Induced subgraph on `keep`, relabelled to `0..keep.len()` in the given
    /// order. Returns the new graph and, for each new edge, the old edge id.
    pub fn induced(&self, keep: &[usize]) -> (WeightedGraph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let mut g = WeightedGraph { n: keep.len(), edges: Vec::new(), adj: vec![Vec::new(); keep.len()], multigraph: self.multigraph };
        let mut origin = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            let (a, b) = (local[e.u], local[e.v]);
            if a != usize::MAX && b != usize::MAX {
                let nid = g.edges.len();
                g.edges.push(Edge { u: a, v: b, w: e.w });
                g.adj[a].push((b, nid));
                g.adj[b].push((a, nid));
                origin.push(id);
            }
        }
        (g, origin)
    }

    /// Whether the edge set is acyclic.
    pub fn is_forest(&self) -> bool {
        let mut uf = UnionFind::new(self.n);
        self.edges.iter().all(|e| uf.union(e.u, e.v))
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        let mut g = WeightedGraph::new(3);
        assert!(matches!(g.add_edge(0, 3, 1.0), Err(GraphError::UnknownVertex(3))));
        assert!(matches!(g.add_edge(0, 0, 1.0), Err(GraphError::SelfLoop(0))));
        assert!(matches!(g.add_edge(0, 1, 0.0), Err(GraphError::BadWeight { .. })));
        assert!(matches!(g.add_edge(0, 1, f64::NAN), Err(GraphError::BadWeight { .. })));
        g.add_edge(0, 1, 1.0).unwrap();
        assert!(matches!(g.add_edge(1, 0, 2.0), Err(GraphError::ParallelEdge(1, 0))));
    }

    #[test]
    fn multigraph_keeps_parallel_edges() {
        let mut g = WeightedGraph::new_multigraph(2);
        g.add_edge(0, 1, 2.0).unwrap();
        g.add_edge(0, 1, 1.0).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.edge_between(1, 0), Some(1));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0)]).unwrap();
        for (id, e) in g.edges().iter().enumerate() {
            assert!(g.neighbors(e.u).contains(&(e.v, id)));
            assert!(g.neighbors(e.v).contains(&(e.u, id)));
        }
    }

    #[test]
    fn embed_detects_foreign_edges() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let s = WeightedGraph::from_edges(3, &[(1, 2, 2.0)]).unwrap();
        assert_eq!(g.embed_subgraph(&s).unwrap(), vec![1]);
        let bad = WeightedGraph::from_edges(3, &[(0, 2, 2.0)]).unwrap();
        assert!(g.embed_subgraph(&bad).is_err());
        let reweighted = WeightedGraph::from_edges(3, &[(1, 2, 2.5)]).unwrap();
        assert!(g.embed_subgraph(&reweighted).is_err());
    }

    #[test]
    fn induced_relabels() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0)]).unwrap();
        let (h, origin) = g.induced(&[3, 2, 1]);
        assert_eq!(h.n(), 3);
        assert_eq!(origin, vec![1, 2]);
        assert_eq!(h.edge(0).key(), (1, 2));
    }

    #[test]
    fn components_and_forest() {
        let g = WeightedGraph::from_edges(5, &[(0, 1, 1.0), (3, 4, 1.0)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(g.is_forest());
        let c = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert!(!c.is_forest());
    }
}
