//! Turning a contracted tour back into a closed walk of the spanner.

use std::collections::BTreeMap;

use graph_core::graph::UnionFind;
use graph_core::steiner::prune_leaves;
use graph_core::{shortest_paths, WeightedGraph};
use serde::Serialize;

use crate::PtasError;

pub const EXACT_MATCHING_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchingKind {
    None,
    Exact,
    Greedy,
}

/// Edge multiplicities keyed by edge id.
pub type Multiset = BTreeMap<usize, u32>;

pub fn multiset_weight(g: &WeightedGraph, m: &Multiset) -> f64 {
    m.iter().map(|(&id, &c)| g.edge(id).w * f64::from(c)).sum()
}

/// Checks that `m` is a closed walk through every terminal: even degrees,
/// one connected support, and every terminal on it (when there are at least
/// two distinct terminals).
pub fn check_closed_walk(g: &WeightedGraph, m: &Multiset, terminals: &[usize]) -> Result<(), String> {
    let mut deg = vec![0u32; g.n()];
    let mut uf = UnionFind::new(g.n());
    for (&id, &c) in m {
        if c == 0 {
            continue;
        }
        let e = g.edge(id);
        deg[e.u] += c;
        deg[e.v] += c;
        uf.union(e.u, e.v);
    }
    if let Some(v) = deg.iter().position(|d| d % 2 == 1) {
        return Err(format!("vertex {v} has odd degree {}", deg[v]));
    }
    let mut distinct = terminals.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() >= 2 {
        if let Some(t) = distinct.iter().find(|&&t| deg[t] == 0) {
            return Err(format!("terminal {t} is not on the walk"));
        }
    }
    let mut roots: Vec<usize> = (0..g.n()).filter(|&v| deg[v] > 0).map(|v| uf.find(v)).collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() > 1 {
        return Err(format!("walk support has {} components", roots.len()));
    }
    Ok(())
}

pub struct Lifted {
    pub edges: Multiset,
    pub odd_vertices: usize,
    pub matching: MatchingKind,
}

/// Uncontracts a tour of the contracted graph.
///
/// `tour` holds spanner edges (already mapped back from the contracted
/// graph). For every super vertex the walk touches, or that holds a
/// terminal, a spanning tree of its contracted edges, pruned to the touched
/// vertices and terminals, is added once. Odd-degree vertices are then
/// paired by a minimum-weight matching on spanner distances, and every
/// multiplicity above 2 is reduced by 2.
pub fn lift(
    s: &WeightedGraph,
    x: &[usize],
    super_of: &[usize],
    tour: &Multiset,
    terminals: &[usize],
) -> Result<Lifted, PtasError> {
    let mut edges = tour.clone();
    let mut keep = vec![false; s.n()];
    for (&id, _) in tour.iter().filter(|(_, &c)| c > 0) {
        let e = s.edge(id);
        keep[e.u] = true;
        keep[e.v] = true;
    }
    for &t in terminals {
        keep[t] = true;
    }
    let mut needed_super = vec![false; super_of.iter().max().map_or(0, |m| m + 1)];
    for v in 0..s.n() {
        if keep[v] {
            needed_super[super_of[v]] = true;
        }
    }
    let mut x_sorted = x.to_vec();
    x_sorted.sort_unstable();
    let x_graph = s.edge_subgraph(x_sorted.iter().copied());
    let forest = graph_core::mst::minimum_spanning_forest(&x_graph);
    let forest_graph = x_graph.edge_subgraph(forest.iter().copied());
    let keep_list: Vec<usize> = (0..s.n()).filter(|&v| keep[v]).collect();
    let pruned = prune_leaves(&forest_graph, &keep_list);
    let ids = s.embed_subgraph(&pruned)?;
    for id in ids {
        let e = s.edge(id);
        if needed_super[super_of[e.u]] {
            *edges.entry(id).or_insert(0) += 1;
        }
    }
    let mut deg = vec![0u32; s.n()];
    for (&id, &c) in &edges {
        let e = s.edge(id);
        deg[e.u] += c;
        deg[e.v] += c;
    }
    let odd: Vec<usize> = (0..s.n()).filter(|&v| deg[v] % 2 == 1).collect();
    let matching = if odd.is_empty() {
        MatchingKind::None
    } else if odd.len() <= EXACT_MATCHING_LIMIT {
        MatchingKind::Exact
    } else {
        MatchingKind::Greedy
    };
    if !odd.is_empty() {
        let trees: Vec<_> = odd.iter().map(|&v| shortest_paths(s, v)).collect::<Result<_, _>>()?;
        let d = |a: usize, b: usize| trees[a].dist[odd[b]];
        let pairs = if matching == MatchingKind::Exact { exact_matching(odd.len(), &d) } else { greedy_matching(odd.len(), &d) };
        for (a, b) in pairs {
            let path = trees[a]
                .edge_path_to(odd[b])
                .ok_or_else(|| PtasError::Internal(format!("odd vertices {} and {} are not connected", odd[a], odd[b])))?;
            for id in path {
                *edges.entry(id).or_insert(0) += 1;
            }
        }
    }
    for c in edges.values_mut() {
        while *c > 2 {
            *c -= 2;
        }
    }
    Ok(Lifted { edges, odd_vertices: odd.len(), matching })
}

/// Minimum-weight perfect matching by DP over subsets; the lowest unmatched
/// index is always paired next.
pub fn exact_matching(n: usize, d: &dyn Fn(usize, usize) -> f64) -> Vec<(usize, usize)> {
    let full = (1usize << n) - 1;
    let mut best = vec![f64::INFINITY; 1 << n];
    let mut choice = vec![(0usize, 0usize); 1 << n];
    best[0] = 0.0;
    for mask in 0..full {
        if !best[mask].is_finite() {
            continue;
        }
        let i = (!mask).trailing_zeros() as usize;
        for j in i + 1..n {
            if mask >> j & 1 == 0 {
                let next = mask | 1 << i | 1 << j;
                let w = best[mask] + d(i, j);
                if w < best[next] {
                    best[next] = w;
                    choice[next] = (i, j);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let (i, j) = choice[mask];
        out.push((i, j));
        mask &= !(1 << i | 1 << j);
    }
    out.reverse();
    out
}

/// Repeatedly pairs the closest remaining two vertices.
pub fn greedy_matching(n: usize, d: &dyn Fn(usize, usize) -> f64) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(f64, usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (d(i, j), i, j)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut used = vec![false; n];
    let mut out = Vec::new();
    for (_, i, j) in pairs {
        if !used[i] && !used[j] {
            used[i] = true;
            used[j] = true;
            out.push((i, j));
        }
    }
    out
}
