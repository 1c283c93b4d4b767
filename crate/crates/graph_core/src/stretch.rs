//! Stretch verification and lightness measurement.

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::WeightedGraph;
use crate::par::{self, Exec};
use crate::paths::shortest_paths;
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStretch {
    pub a: usize,
    pub b: usize,
    pub d_g: f64,
    pub d_s: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub max_stretch: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub bound: f64,
    pub violations: usize,
    pub per_pair: Vec<PairStretch>,
}

impl StretchReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Compare terminal distances in `spanner` against `graph`.
///
/// A pair violates the bound when `d_S > bound * d_G * (1 + 1e-9)`. A pair
/// unreachable in the spanner gets an infinite ratio. Shrinking distances
/// (which a true subgraph cannot do) are rejected as a subgraph error.
pub fn verify_stretch(
    spanner: &WeightedGraph,
    graph: &WeightedGraph,
    terminals: &[usize],
    bound: f64,
) -> Result<StretchReport, GraphError> {
    verify_stretch_with(spanner, graph, terminals, bound, Exec::Parallel)
}

pub fn verify_stretch_with(
    spanner: &WeightedGraph,
    graph: &WeightedGraph,
    terminals: &[usize],
    bound: f64,
    exec: Exec,
) -> Result<StretchReport, GraphError> {
    graph.embed_subgraph(spanner)?;
    for &t in terminals {
        graph.check_vertex(t)?;
    }
    let rows = par::map(exec, terminals, |&t| {
        let dg = shortest_paths(graph, t).expect("checked vertex").dist;
        let ds = shortest_paths(spanner, t).expect("checked vertex").dist;
        (dg, ds)
    });
    let mut per_pair = Vec::new();
    for (i, &a) in terminals.iter().enumerate() {
        let (dg, ds) = &rows[i];
        for &b in &terminals[i + 1..] {
            let (d_g, d_s) = (dg[b], ds[b]);
            if !d_g.is_finite() {
                return Err(GraphError::Disconnected(a, b));
            }
            if tol::definitely_less(d_s, d_g) {
                return Err(GraphError::NotSubgraph(format!(
                    "spanner distance {d_s} between {a} and {b} is below graph distance {d_g}"
                )));
            }
            let ratio = if d_g == 0.0 { 1.0 } else { (d_s / d_g).max(1.0) };
            per_pair.push(PairStretch { a, b, d_g, d_s, ratio });
        }
    }
    let mut max_stretch = 1.0;
    let mut worst_pair = None;
    let mut violations = 0;
    for p in &per_pair {
        if worst_pair.is_none() || p.ratio > max_stretch {
            max_stretch = p.ratio;
            worst_pair = Some((p.a, p.b));
        }
        if !tol::within(p.d_s, bound * p.d_g) {
            violations += 1;
        }
    }
    Ok(StretchReport { max_stretch, worst_pair, bound, violations, per_pair })
}

/// `w(spanner) / w(baseline)`.
pub fn measure_lightness(spanner: &WeightedGraph, baseline: &WeightedGraph) -> Result<f64, GraphError> {
    let base = baseline.total_weight();
    if base <= 0.0 {
        return Err(GraphError::Degenerate("baseline tree has zero weight".into()));
    }
    Ok(spanner.total_weight() / base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spanner() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let r = verify_stretch(&g, &g, &[0, 1, 2], 1.0).unwrap();
        assert_eq!(r.max_stretch, 1.0);
        assert!(r.passed());
        assert_eq!(r.per_pair.len(), 3);
    }

    #[test]
    fn four_cycle_missing_edge() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        let s = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let r = verify_stretch(&s, &g, &[3, 0], 2.0).unwrap();
        assert_eq!(r.max_stretch, 3.0);
        assert_eq!(r.worst_pair, Some((3, 0)));
        assert_eq!(r.violations, 1);
    }

    #[test]
    fn unreachable_pair_is_infinite() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let s = WeightedGraph::new(2);
        let r = verify_stretch(&s, &g, &[0, 1], 2.0).unwrap();
        assert!(r.max_stretch.is_infinite());
        assert!(!r.passed());
    }

    #[test]
    fn foreign_edge_rejected() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let s = WeightedGraph::from_edges(3, &[(0, 2, 1.0)]).unwrap();
        assert!(matches!(verify_stretch(&s, &g, &[0, 2], 1.0), Err(GraphError::NotSubgraph(_))));
    }

    #[test]
    fn lightness() {
        let a = WeightedGraph::from_edges(2, &[(0, 1, 30.0)]).unwrap();
        let b = WeightedGraph::from_edges(2, &[(0, 1, 10.0)]).unwrap();
        assert_eq!(measure_lightness(&a, &b).unwrap(), 3.0);
        assert_eq!(measure_lightness(&b, &b).unwrap(), 1.0);
        assert!(measure_lightness(&a, &WeightedGraph::new(2)).is_err());
    }
}
