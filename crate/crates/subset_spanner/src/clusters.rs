//! Spanner edge sets, level-0 clusters, cluster graphs and cluster trees.

use std::collections::BTreeMap;

use serde::Serialize;

use graph_core::{shortest_paths_filtered, tol, MetricEdge, ShortestPaths, TerminalMetric, WeightedGraph};

use crate::error::SubsetError;

/// A growing set of graph edges, the spanner under construction.
#[derive(Debug, Clone)]
pub struct EdgeSet {
    mask: Vec<bool>,
    ids: Vec<usize>,
}

impl EdgeSet {
    pub fn new(m: usize) -> Self {
        EdgeSet { mask: vec![false; m], ids: Vec::new() }
    }

    pub fn contains(&self, id: usize) -> bool {
        self.mask[id]
    }

    pub fn insert(&mut self, id: usize) -> bool {
        if self.mask[id] {
            return false;
        }
        self.mask[id] = true;
        self.ids.push(id);
        true
    }

    /// Insert edges, returning the weight of those that were new.
    pub fn extend(&mut self, graph: &WeightedGraph, ids: impl IntoIterator<Item = usize>) -> f64 {
        ids.into_iter().filter(|&id| self.insert(id)).map(|id| graph.edge(id).w).sum()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn weight(&self, graph: &WeightedGraph) -> f64 {
        self.ids.iter().map(|&id| graph.edge(id).w).sum()
    }

    pub fn to_graph(&self, graph: &WeightedGraph) -> WeightedGraph {
        graph.edge_subgraph(self.ids.iter().copied())
    }

    pub fn search(&self, graph: &WeightedGraph, source: usize) -> ShortestPaths {
        shortest_paths_filtered(graph, source, |id| self.mask[id]).expect("source is a graph vertex")
    }
}

/// Largest distance between two of `vertices` using only `members` edges.
pub fn member_diameter(graph: &WeightedGraph, vertices: &[usize], members: &[usize]) -> f64 {
    if vertices.len() < 2 {
        return 0.0;
    }
    let mut set = EdgeSet::new(graph.m());
    for &id in members {
        set.insert(id);
    }
    let mut best: f64 = 0.0;
    for (i, &v) in vertices.iter().enumerate() {
        let sp = set.search(graph, v);
        for &u in &vertices[i + 1..] {
            best = best.max(sp.dist[u]);
        }
    }
    best
}

/// Partition of terminal indices into clusters of diameter below `4ℓ₀`
/// along tree edges of weight at most `ℓ₀`.
///
/// Inside each component of the short tree edges, clusters are cut bottom-up
/// (root = smallest index) as soon as the pending radius reaches `ℓ₀`. A
/// leftover at the root joins an adjacent cut cluster.
pub fn level0_clusters(k: usize, mst: &[MetricEdge], ell0: f64) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k];
    for e in mst.iter().filter(|e| e.w <= ell0) {
        adj[e.i].push((e.j, e.w));
        adj[e.j].push((e.i, e.w));
    }
    for a in &mut adj {
        a.sort_by_key(|x| x.0);
    }
    let mut seen = vec![false; k];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut owner = vec![usize::MAX; k];
    for root in 0..k {
        if seen[root] {
            continue;
        }
        let mut order = Vec::new();
        let mut parent = vec![usize::MAX; k];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(u, _) in adj[v].iter().rev() {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    stack.push(u);
                }
            }
        }
        let mut pending: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut radius = vec![0.0f64; k];
        let mut emitted = vec![false; k];
        for &v in order.iter().rev() {
            let mut pend = vec![v];
            for &(c, w) in &adj[v] {
                if parent[c] != v || emitted[c] {
                    continue;
                }
                pend.extend(pending.remove(&c).unwrap_or_default());
                radius[v] = radius[v].max(radius[c] + w);
            }
            if radius[v] >= ell0 {
                pend.sort_unstable();
                for &x in &pend {
                    owner[x] = clusters.len();
                }
                clusters.push(pend);
                emitted[v] = true;
            } else {
                pending.insert(v, pend);
            }
        }
        if let Some(mut rest) = pending.remove(&root) {
            rest.sort_unstable();
            let target = rest.iter().find_map(|&u| {
                adj[u].iter().find(|&&(c, _)| parent[c] == u && emitted[c]).map(|&(c, _)| owner[c])
            });
            match target {
                Some(t) => {
                    clusters[t].extend(rest);
                    clusters[t].sort_unstable();
                }
                None => clusters.push(rest),
            }
        }
    }
    clusters
}

/// An edge of the cluster graph: the lightest bucket edge between two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KEdge {
    pub a: usize,
    pub b: usize,
    pub e: MetricEdge,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ClusterGraph {
    pub nodes: usize,
    pub edges: Vec<KEdge>,
    /// Pairs dropped because the current spanner already served them.
    pub removed: usize,
    #[serde(skip)]
    adj: Vec<Vec<(usize, usize)>>,
}

impl ClusterGraph {
    pub fn from_edges(nodes: usize, edges: Vec<KEdge>) -> Self {
        let mut adj = vec![Vec::new(); nodes];
        for (idx, e) in edges.iter().enumerate() {
            adj[e.a].push((e.b, idx));
            adj[e.b].push((e.a, idx));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        ClusterGraph { nodes, edges, removed: 0, adj }
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x].len()
    }

    /// `(neighbour, edge index)` sorted by neighbour.
    pub fn neighbors(&self, x: usize) -> &[(usize, usize)] {
        &self.adj[x]
    }
}

/// Build the cluster graph of one level.
///
/// Keeps the lightest bucket edge per pair of distinct clusters, then drops
/// pairs whose spanner distance is already within `1 + (6g+1)ε` of the edge.
pub fn build_cluster_graph(
    graph: &WeightedGraph,
    metric: &TerminalMetric,
    cluster_of: &[usize],
    nodes: usize,
    bucket: &[MetricEdge],
    spanner: &EdgeSet,
    eps: f64,
    g: f64,
) -> Result<ClusterGraph, SubsetError> {
    let mut best: BTreeMap<(usize, usize), MetricEdge> = BTreeMap::new();
    for e in bucket {
        let (x, y) = (cluster_of[e.i], cluster_of[e.j]);
        if x == y {
            return Err(SubsetError::Invariant(format!(
                "bucket edge ({}, {}) of weight {} lies inside cluster {x}",
                e.i, e.j, e.w
            )));
        }
        let key = (x.min(y), x.max(y));
        let better = match best.get(&key) {
            None => true,
            Some(cur) => (e.w, e.i, e.j) < (cur.w, cur.i, cur.j),
        };
        if better {
            best.insert(key, *e);
        }
    }
    let bound = 1.0 + (6.0 * g + 1.0) * eps;
    let mut by_source: BTreeMap<usize, Vec<(usize, usize, MetricEdge)>> = BTreeMap::new();
    for (&(x, y), e) in &best {
        by_source.entry(e.i).or_default().push((x, y, *e));
    }
    let mut kept = Vec::new();
    let mut removed = 0;
    for (src, list) in by_source {
        let sp = spanner.search(graph, metric.terminals[src]);
        for (x, y, e) in list {
            if tol::within(sp.dist[metric.terminals[e.j]], bound * e.w) {
                removed += 1;
            } else {
                kept.push(KEdge { a: x, b: y, e });
            }
        }
    }
    kept.sort_by_key(|p| (p.a, p.b));
    let mut k = ClusterGraph::from_edges(nodes, kept);
    k.removed = removed;
    Ok(k)
}

/// A tree edge between two clusters, from the terminal MST.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub e: MetricEdge,
}

/// Spanning forest of the clusters joined by MST edges of weight at most `ℓ`.
#[derive(Debug, Clone, Default)]
pub struct ClusterTree {
    pub nodes: usize,
    pub edges: Vec<TreeEdge>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl ClusterTree {
    pub fn build(cluster_of: &[usize], nodes: usize, mst: &[MetricEdge], ell: f64) -> Self {
        let mut sorted: Vec<MetricEdge> = mst.iter().copied().filter(|e| e.w <= ell).collect();
        sorted.sort_by(|p, q| p.w.total_cmp(&q.w).then(p.i.cmp(&q.i)).then(p.j.cmp(&q.j)));
        let mut uf = graph_core::graph::UnionFind::new(nodes);
        let edges = sorted
            .into_iter()
            .filter_map(|e| {
                let (a, b) = (cluster_of[e.i], cluster_of[e.j]);
                (a != b && uf.union(a, b)).then_some(TreeEdge { a, b, e })
            })
            .collect();
        Self::from_edges(nodes, edges)
    }

    pub fn from_edges(nodes: usize, edges: Vec<TreeEdge>) -> Self {
        let mut adj = vec![Vec::new(); nodes];
        for (idx, e) in edges.iter().enumerate() {
            adj[e.a].push((e.b, idx));
            adj[e.b].push((e.a, idx));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        ClusterTree { nodes, edges, adj }
    }

    /// `(neighbour, edge index)` sorted by neighbour.
    pub fn neighbors(&self, x: usize) -> &[(usize, usize)] {
        &self.adj[x]
    }

    pub fn weight(&self, idx: usize) -> f64 {
        self.edges[idx].e.w
    }
}
