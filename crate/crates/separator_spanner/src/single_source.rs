//! Single-source spanners to a shortest path, and their walk generalisation.

use std::collections::BTreeMap;

use serde::Serialize;

use graph_core::paths::{multi_source, shortest_paths_filtered};
use graph_core::WeightedGraph;

use crate::error::SeparatorError;
use crate::path::{check_shortest, lightest_kept, oriented, BasePath};

/// Shortest paths from one source to anchor vertices on a base path.
///
/// Anchors are listed left to right; `anchors[zero]` is the vertex of the
/// base path closest to the source. Entry `i` of `paths` is a shortest path
/// from the source to `anchors[i]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchoredPathSet {
    pub source: usize,
    /// Base path with its smaller-id endpoint first.
    pub base_path: Vec<usize>,
    pub base_prefix: Vec<f64>,
    /// Positions of the anchors in `base_path`, increasing.
    pub anchors: Vec<usize>,
    pub zero: usize,
    pub paths: Vec<Vec<usize>>,
    pub path_edges: Vec<Vec<usize>>,
    pub path_weights: Vec<f64>,
    /// Distance from the source to the base path.
    pub r: f64,
}

impl AnchoredPathSet {
    /// Number of anchors right of the closest one.
    pub fn right_count(&self) -> usize {
        self.anchors.len() - 1 - self.zero
    }

    pub fn left_count(&self) -> usize {
        self.zero
    }

    pub fn anchor_vertices(&self) -> Vec<usize> {
        self.anchors.iter().map(|&a| self.base_path[a]).collect()
    }

    /// Summed path weight of the closest anchor and the anchors to its right.
    pub fn right_weight(&self) -> f64 {
        self.path_weights[self.zero..].iter().sum()
    }

    pub fn left_weight(&self) -> f64 {
        self.path_weights[..=self.zero].iter().sum()
    }

    /// Distance along the base path from the closest anchor to the
    /// rightmost one.
    pub fn right_reach(&self) -> f64 {
        self.base_prefix[*self.anchors.last().unwrap()] - self.base_prefix[self.anchors[self.zero]]
    }

    pub fn left_reach(&self) -> f64 {
        self.base_prefix[self.anchors[self.zero]] - self.base_prefix[self.anchors[0]]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.path_edges.iter().flatten().copied()
    }

    /// Union of the anchor paths as a subgraph of `graph`.
    pub fn to_subgraph(&self, graph: &WeightedGraph) -> WeightedGraph {
        graph.edge_subgraph(self.edge_ids())
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<(), SeparatorError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(SeparatorError::Input(format!("epsilon must lie in (0, 1), got {eps}")))
    }
}

/// Anchor selection on an already verified, oriented base path, using only
/// edges accepted by `keep`.
pub(crate) fn anchored(
    g: &WeightedGraph,
    keep: &dyn Fn(usize) -> bool,
    base: &BasePath,
    p: usize,
    eps: f64,
) -> Result<AnchoredPathSet, SeparatorError> {
    g.check_vertex(p)?;
    let sp = shortest_paths_filtered(g, p, keep)?;
    let d = |pos: usize| sp.dist[base.vertices[pos]];
    let z = (0..base.len())
        .min_by(|&a, &b| d(a).total_cmp(&d(b)).then(a.cmp(&b)))
        .expect("base path is non-empty");
    if !d(z).is_finite() {
        return Err(SeparatorError::Input(format!("source {p} cannot reach the base path")));
    }
    let mut right = Vec::new();
    let mut prev = z;
    for pos in z + 1..base.len() {
        if (1.0 + eps) * d(pos) < d(prev) + base.along(prev, pos) {
            right.push(pos);
            prev = pos;
        }
    }
    let mut left = Vec::new();
    prev = z;
    for pos in (0..z).rev() {
        if (1.0 + eps) * d(pos) < d(prev) + base.along(prev, pos) {
            left.push(pos);
            prev = pos;
        }
    }
    left.reverse();
    let zero = left.len();
    let mut anchors = left;
    anchors.push(z);
    anchors.extend(right);
    let mut paths = Vec::with_capacity(anchors.len());
    let mut path_edges = Vec::with_capacity(anchors.len());
    let mut path_weights = Vec::with_capacity(anchors.len());
    for &a in &anchors {
        let y = base.vertices[a];
        paths.push(sp.path_to(y).expect("anchor reachable"));
        path_edges.push(sp.edge_path_to(y).expect("anchor reachable"));
        path_weights.push(sp.dist[y]);
    }
    Ok(AnchoredPathSet {
        source: p,
        base_path: base.vertices.clone(),
        base_prefix: base.prefix.clone(),
        anchors,
        zero,
        paths,
        path_edges,
        path_weights,
        r: d(z),
    })
}

/// Single-source spanner from `source` to the shortest path `base_path`.
///
/// Starting from the closest vertex `y_0`, each next anchor to the right is
/// the first vertex `v` with `(1+ε)·d(p, v) < d(p, prev) + d_P(prev, v)`;
/// the left side is symmetric.
pub fn ss_spanner(
    graph: &WeightedGraph,
    base_path: &[usize],
    source: usize,
    eps: f64,
) -> Result<AnchoredPathSet, SeparatorError> {
    check_eps(eps)?;
    let base = check_shortest(graph, &oriented(base_path), &|_| true)?;
    anchored(graph, &|_| true, &base, source, eps)
}

/// Output of [`walk_to_path_spanner`].
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpanner {
    /// Walk edges together with every anchor path.
    pub graph: WeightedGraph,
    /// Walk positions chosen as sources.
    pub breakpoints: Vec<usize>,
    /// One anchored set per distinct breakpoint vertex.
    pub path_sets: Vec<AnchoredPathSet>,
    /// Distance between the walk and the base path.
    pub r: f64,
    pub walk_weight: f64,
}

impl WalkSpanner {
    /// Summed weight of all anchor paths (walk edges excluded).
    pub fn anchor_weight(&self) -> f64 {
        self.path_sets.iter().map(|s| s.path_weights.iter().sum::<f64>()).sum()
    }
}

/// Spanner between every vertex of `walk` and every vertex of `base_path`.
///
/// Breakpoints start at the first walk vertex; the next one is the first
/// later position whose walk distance from the previous breakpoint exceeds
/// `ε` times its distance to the base path. A single-source spanner is
/// built from every breakpoint. Stretch is `1 + 4ε` for `ε < 1`.
pub fn walk_to_path_spanner(
    graph: &WeightedGraph,
    walk: &[usize],
    base_path: &[usize],
    eps: f64,
) -> Result<WalkSpanner, SeparatorError> {
    check_eps(eps)?;
    if walk.is_empty() {
        return Err(SeparatorError::Input("walk is empty".into()));
    }
    for &v in walk {
        graph.check_vertex(v)?;
    }
    let mut walk_edges = Vec::with_capacity(walk.len().saturating_sub(1));
    let mut along = vec![0.0];
    for w in walk.windows(2) {
        let id = lightest_kept(graph, w[0], w[1], &|_| true)
            .ok_or_else(|| SeparatorError::Input(format!("walk step {} -> {} is not an edge", w[0], w[1])))?;
        walk_edges.push(id);
        along.push(along.last().unwrap() + graph.edge(id).w);
    }
    let base = check_shortest(graph, &oriented(base_path), &|_| true)?;
    let to_p = multi_source(graph, &base.vertices, |_| true)?.dist;
    let r = walk.iter().map(|&v| to_p[v]).fold(f64::INFINITY, f64::min);
    let mut breakpoints = vec![0];
    for i in 1..walk.len() {
        let last = *breakpoints.last().unwrap();
        if along[i] - along[last] > eps * to_p[walk[i]] {
            breakpoints.push(i);
        }
    }
    let mut by_vertex: BTreeMap<usize, AnchoredPathSet> = BTreeMap::new();
    for &b in &breakpoints {
        let v = walk[b];
        if let std::collections::btree_map::Entry::Vacant(e) = by_vertex.entry(v) {
            e.insert(anchored(graph, &|_| true, &base, v, eps)?);
        }
    }
    let path_sets: Vec<AnchoredPathSet> = by_vertex.into_values().collect();
    let ids = walk_edges.iter().copied().chain(path_sets.iter().flat_map(|s| s.edge_ids()));
    Ok(WalkSpanner {
        graph: graph.edge_subgraph(ids),
        breakpoints,
        path_sets,
        r,
        walk_weight: *along.last().unwrap(),
    })
}
