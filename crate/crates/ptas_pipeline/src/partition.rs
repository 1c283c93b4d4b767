//! Edge partitions of a spanner and contraction of the chosen part.

use std::collections::VecDeque;

use graph_core::graph::UnionFind;
use graph_core::WeightedGraph;
use serde::Serialize;
use treewidth_dp::{Heuristic, TreeDecomposition};

/// Splits the edge set of a graph into `g` parts.
pub trait Partitioner: Sync {
    fn name(&self) -> &str;
    /// Disjoint edge-id lists covering every edge. Parts may be empty.
    fn parts(&self, graph: &WeightedGraph, g: usize) -> Vec<Vec<usize>>;
}

/// Groups edges by the BFS depth of their shallower endpoint modulo `g`.
/// Every component is searched from its smallest vertex.
#[derive(Clone, Copy, Debug, Default)]
pub struct BfsLayerPartitioner;

impl Partitioner for BfsLayerPartitioner {
    fn name(&self) -> &str {
        "bfs-layer"
    }

    fn parts(&self, graph: &WeightedGraph, g: usize) -> Vec<Vec<usize>> {
        let g = g.max(1);
        let depth = bfs_depths(graph);
        let mut parts = vec![Vec::new(); g];
        for (id, e) in graph.edges().iter().enumerate() {
            parts[depth[e.u].min(depth[e.v]) % g].push(id);
        }
        parts
    }
}

pub fn bfs_depths(graph: &WeightedGraph) -> Vec<usize> {
    let mut depth = vec![usize::MAX; graph.n()];
    for s in 0..graph.n() {
        if depth[s] != usize::MAX {
            continue;
        }
        depth[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in graph.neighbors(x) {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    queue.push_back(y);
                }
            }
        }
    }
    depth
}

/// Heaviest edge first into the currently lightest bin, with
/// `min(g, |E|)` bins so that no bin is empty.
#[derive(Clone, Copy, Debug, Default)]
pub struct GreedyPartitioner;

impl Partitioner for GreedyPartitioner {
    fn name(&self) -> &str {
        "greedy"
    }

    fn parts(&self, graph: &WeightedGraph, g: usize) -> Vec<Vec<usize>> {
        let bins = g.max(1).min(graph.m().max(1));
        let mut order: Vec<usize> = (0..graph.m()).collect();
        order.sort_by(|&a, &b| graph.edge(b).w.total_cmp(&graph.edge(a).w).then(a.cmp(&b)));
        let mut parts = vec![Vec::new(); bins];
        let mut load = vec![0.0f64; bins];
        for id in order {
            let b = (0..bins).min_by(|&x, &y| load[x].total_cmp(&load[y]).then(x.cmp(&y))).unwrap();
            load[b] += graph.edge(id).w;
            parts[b].push(id);
        }
        for p in &mut parts {
            p.sort_unstable();
        }
        parts
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionPartition {
    pub g: usize,
    pub parts: Vec<Vec<usize>>,
    /// Index of the lightest part (smallest index on ties).
    pub chosen: usize,
    pub weight_x: f64,
    pub weight_s: f64,
    /// Min-fill width of the graph with the chosen part contracted.
    pub measured_width: usize,
}

impl ContractionPartition {
    pub fn chosen_edges(&self) -> &[usize] {
        &self.parts[self.chosen]
    }
}

pub fn partition_spanner(s: &WeightedGraph, g: usize, partitioner: &dyn Partitioner) -> ContractionPartition {
    let parts = partitioner.parts(s, g);
    let weight = |p: &Vec<usize>| p.iter().map(|&id| s.edge(id).w).sum::<f64>();
    let chosen = (0..parts.len()).min_by(|&a, &b| weight(&parts[a]).total_cmp(&weight(&parts[b])).then(a.cmp(&b))).unwrap();
    let contracted = contract(s, &parts[chosen], &[]);
    let measured_width = TreeDecomposition::heuristic(&contracted.graph, Heuristic::MinFill).width();
    ContractionPartition { g: parts.len(), weight_x: weight(&parts[chosen]), weight_s: s.total_weight(), parts, chosen, measured_width }
}

/// A graph with an edge set contracted.
#[derive(Clone, Debug)]
pub struct Contracted {
    pub graph: WeightedGraph,
    /// Super vertex of each original vertex.
    pub super_of: Vec<usize>,
    /// Original edge id of each contracted-graph edge.
    pub origin: Vec<usize>,
    /// Super vertices holding at least one terminal, one entry each.
    pub terminals: Vec<usize>,
    /// Terminals merged into a super vertex that already had one.
    pub absorbed_terminals: usize,
}

/// Contracts the edges `x` of `s`. Loops vanish; parallel edges stay. Super
/// vertices are numbered by their smallest original vertex. A super vertex
/// holding any terminal is a terminal; terminals are merged in increasing
/// edge-id order of `x`.
pub fn contract(s: &WeightedGraph, x: &[usize], terminals: &[usize]) -> Contracted {
    let mut uf = UnionFind::new(s.n());
    let mut ids = x.to_vec();
    ids.sort_unstable();
    for &id in &ids {
        let e = s.edge(id);
        uf.union(e.u, e.v);
    }
    let mut label = vec![usize::MAX; s.n()];
    let mut super_of = vec![0; s.n()];
    let mut count = 0;
    for v in 0..s.n() {
        let r = uf.find(v);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        super_of[v] = label[r];
    }
    let mut graph = WeightedGraph::new_multigraph(count);
    let mut origin = Vec::new();
    let in_x: std::collections::BTreeSet<usize> = ids.iter().copied().collect();
    for (id, e) in s.edges().iter().enumerate() {
        let (a, b) = (super_of[e.u], super_of[e.v]);
        if in_x.contains(&id) || a == b {
            continue;
        }
        graph.add_edge(a, b, e.w).expect("valid contracted edge");
        origin.push(id);
    }
    let mut marked = vec![false; count];
    let mut absorbed = 0;
    for &t in terminals {
        if std::mem::replace(&mut marked[super_of[t]], true) {
            absorbed += 1;
        }
    }
    let terminals = (0..count).filter(|&v| marked[v]).collect();
    Contracted { graph, super_of, origin, terminals, absorbed_terminals: absorbed }
}
