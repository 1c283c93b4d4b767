//! Path-to-path spanners: preserve demand paths that cross base paths.

use std::collections::BTreeSet;

use graph_core::paths::path_weight;
use graph_core::{tol, WeightedGraph};

use crate::error::SeparatorError;
use crate::path::{check_shortest, oriented, BasePath};
use crate::single_source::{anchored, check_eps};

fn demand_weight(g: &WeightedGraph, idx: usize, path: &[usize], ell: f64) -> Result<f64, SeparatorError> {
    if path.is_empty() {
        return Err(SeparatorError::Input(format!("demand path {idx} is empty")));
    }
    for &v in path {
        g.check_vertex(v)?;
    }
    let w = path_weight(g, path)
        .ok_or_else(|| SeparatorError::Input(format!("demand path {idx} uses a missing edge")))?;
    if !tol::within(w, ell) {
        return Err(SeparatorError::Input(format!("demand path {idx} has weight {w} above scale {ell}")));
    }
    Ok(w)
}

/// Spanner preserving every demand path that meets the shortest path
/// `base_path`, each within `1 + ε`.
///
/// Edges heavier than `ℓ` are ignored, which may split the base path into
/// segments. For every distinct demand endpoint and every segment one of its
/// demands first meets, the output holds the single-source anchor paths plus
/// the part of the segment within `4ℓ/ε` of the closest anchor.
pub fn ptp_single(
    graph: &WeightedGraph,
    base_path: &[usize],
    demand_paths: &[Vec<usize>],
    ell: f64,
    eps: f64,
) -> Result<WeightedGraph, SeparatorError> {
    check_eps(eps)?;
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(SeparatorError::Input(format!("scale must be positive, got {ell}")));
    }
    let base = check_shortest(graph, &oriented(base_path), &|_| true)?;
    let ids = ptp_on_base(graph, &base, demand_paths, ell, eps)?;
    Ok(graph.edge_subgraph(ids))
}

/// Edge ids of the path-to-path spanner for a verified base path.
fn ptp_on_base(g: &WeightedGraph, base: &BasePath, demands: &[Vec<usize>], ell: f64, eps: f64) -> Result<Vec<usize>, SeparatorError> {
    let keep = |id: usize| tol::within(g.edge(id).w, ell);
    let mut segment_of = vec![0usize; base.len()];
    let mut segments: Vec<(usize, usize)> = vec![(0, 0)];
    for (j, &id) in base.edges.iter().enumerate() {
        if keep(id) {
            segments.last_mut().unwrap().1 = j + 1;
        } else {
            segments.push((j + 1, j + 1));
        }
        segment_of[j + 1] = segments.len() - 1;
    }
    let mut on_base = vec![usize::MAX; g.n()];
    for (pos, &v) in base.vertices.iter().enumerate() {
        on_base[v] = pos;
    }
    let mut runs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, path) in demands.iter().enumerate() {
        demand_weight(g, i, path, ell)?;
        let hit = path
            .iter()
            .find(|&&v| on_base[v] != usize::MAX)
            .ok_or_else(|| SeparatorError::Input(format!("demand path {} misses the base path", i)))?;
        let seg = segment_of[on_base[*hit]];
        runs.insert((path[0], seg));
        runs.insert((*path.last().unwrap(), seg));
    }
    let mut out = Vec::new();
    for (x, seg) in runs {
        let (lo, hi) = segments[seg];
        let piece = BasePath {
            vertices: base.vertices[lo..=hi].to_vec(),
            edges: base.edges[lo..hi].to_vec(),
            prefix: base.prefix[lo..=hi].iter().map(|p| p - base.prefix[lo]).collect(),
        };
        let set = anchored(g, &keep, &piece, x, eps)?;
        out.extend(set.edge_ids());
        let y = set.anchors[set.zero];
        let reach = 4.0 * ell / eps;
        let near: Vec<usize> = (0..piece.len()).filter(|&pos| piece.along(y, pos) <= reach).collect();
        let (a, b) = (near[0], *near.last().unwrap());
        out.extend_from_slice(&piece.edges[a..b]);
    }
    Ok(out)
}

/// Union of [`ptp_single`] over base paths, each demand assigned to the
/// first base path (in the given order) it meets.
pub fn ptp_spanner(
    graph: &WeightedGraph,
    base_paths: &[Vec<usize>],
    demand_paths: &[Vec<usize>],
    ell: f64,
    eps: f64,
) -> Result<WeightedGraph, SeparatorError> {
    check_eps(eps)?;
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(SeparatorError::Input(format!("scale must be positive, got {ell}")));
    }
    let bases: Vec<BasePath> = base_paths
        .iter()
        .map(|p| check_shortest(graph, &oriented(p), &|_| true))
        .collect::<Result<_, _>>()?;
    let mut owner = vec![usize::MAX; graph.n()];
    for (j, b) in bases.iter().enumerate().rev() {
        for &v in &b.vertices {
            owner[v] = j;
        }
    }
    let mut groups: Vec<Vec<Vec<usize>>> = vec![Vec::new(); bases.len()];
    for (i, path) in demand_paths.iter().enumerate() {
        for &v in path {
            graph.check_vertex(v)?;
        }
        let first = path
            .iter()
            .map(|&v| owner[v])
            .min()
            .filter(|&j| j != usize::MAX)
            .ok_or_else(|| SeparatorError::Input(format!("demand path {i} crosses no base path")))?;
        groups[first].push(path.clone());
    }
    let mut ids = Vec::new();
    for (base, group) in bases.iter().zip(&groups) {
        if !group.is_empty() {
            ids.extend(ptp_on_base(graph, base, group, ell, eps)?);
        }
    }
    Ok(graph.edge_subgraph(ids))
}
