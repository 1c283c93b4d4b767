//! Euclidean oracle: greedy `(1+ε)`-spanner with long edges removed.

use graph_core::paths::bounded_distance;
use graph_core::WeightedGraph;

use crate::error::OracleError;
use crate::oracle::{OracleQuery, SpannerOracle};
use crate::points::PointSet;

#[derive(Debug, Clone)]
pub struct EuclideanOracle {
    points: PointSet,
}

impl EuclideanOracle {
    pub fn new(points: PointSet) -> Result<Self, OracleError> {
        match points {
            PointSet::Coords { .. } => Ok(EuclideanOracle { points }),
            PointSet::Matrix { .. } => Err(OracleError::InvalidPoints("euclidean oracle needs coordinates".into())),
        }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }
}

/// Classical greedy spanner on `terminals`: scan pairs by increasing
/// distance and add the pair as an edge when the current graph does not
/// already connect it within `1 + ε`. Pairs at distance `>= limit` are not
/// considered.
pub fn greedy_spanner(points: &PointSet, terminals: &[usize], eps: f64, limit: f64) -> WeightedGraph {
    let mut pairs = Vec::new();
    for (i, &a) in terminals.iter().enumerate() {
        for &b in &terminals[i + 1..] {
            let d = points.dist(a, b);
            if d > 0.0 && d < limit {
                pairs.push((d, a.min(b), a.max(b)));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut g = WeightedGraph::new(points.len());
    for (d, a, b) in pairs {
        let cutoff = (1.0 + eps) * d;
        if bounded_distance(&g, a, b, cutoff, |_| true) > cutoff {
            g.add_edge(a, b, d).expect("fresh pair");
        }
    }
    g
}

impl SpannerOracle for EuclideanOracle {
    fn name(&self) -> &str {
        "euclidean"
    }

    fn universe(&self) -> usize {
        self.points.len()
    }

    fn distance(&self, a: usize, b: usize) -> f64 {
        self.points.dist(a, b)
    }

    fn query(&self, q: &OracleQuery) -> Result<WeightedGraph, OracleError> {
        q.check_universe(self.universe())?;
        Ok(greedy_spanner(&self.points, &q.terminals, q.eps, 2.0 * q.ell))
    }
}
