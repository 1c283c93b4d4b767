//! Net-and-band oracle for doubling and correlation-dimension metrics.
//!
//! Take an `εℓ/96`-net `N` of the terminals. Join net points whose distance
//! lies in `[ℓ/16, 2ℓ]`, then attach every other terminal to its nearest net
//! point.

use graph_core::WeightedGraph;

use crate::error::OracleError;
use crate::net::{nearest, r_net};
use crate::oracle::{OracleQuery, SpannerOracle};
use crate::points::PointSet;

pub const DEFAULT_NET_DIVISOR: f64 = 96.0;
pub const DEFAULT_BAND_DIVISOR: f64 = 16.0;

#[derive(Debug, Clone)]
pub struct DoublingOracle {
    space: PointSet,
    net_divisor: f64,
    band_divisor: f64,
}

impl DoublingOracle {
    pub fn new(space: PointSet) -> Self {
        DoublingOracle { space, net_divisor: DEFAULT_NET_DIVISOR, band_divisor: DEFAULT_BAND_DIVISOR }
    }

    /// Override the net radius divisor and the band lower divisor.
    pub fn with_constants(mut self, net_divisor: f64, band_divisor: f64) -> Self {
        self.net_divisor = net_divisor;
        self.band_divisor = band_divisor;
        self
    }

    pub fn space(&self) -> &PointSet {
        &self.space
    }

    fn build(&self, q: &OracleQuery) -> Result<WeightedGraph, OracleError> {
        q.check_universe(self.space.len())?;
        let r = q.eps * q.ell / self.net_divisor;
        let net = r_net(&self.space, &q.terminals, r);
        let mut g = WeightedGraph::new(self.space.len());
        let lo = q.ell / self.band_divisor;
        let hi = 2.0 * q.ell;
        for (i, &p) in net.iter().enumerate() {
            for &s in &net[i + 1..] {
                let d = self.space.dist(p, s);
                if d >= lo && d <= hi {
                    g.add_edge(p, s, d)?;
                }
            }
        }
        let mut in_net = vec![false; self.space.len()];
        for &p in &net {
            in_net[p] = true;
        }
        for &t in &q.terminals {
            if in_net[t] {
                continue;
            }
            let x = nearest(&self.space, &net, t).expect("net of a non-empty set is non-empty");
            let d = self.space.dist(t, x);
            if d > 0.0 {
                g.add_edge(t, x, d)?;
            }
        }
        Ok(g)
    }
}

impl SpannerOracle for DoublingOracle {
    fn name(&self) -> &str {
        "doubling"
    }

    fn universe(&self) -> usize {
        self.space.len()
    }

    fn distance(&self, a: usize, b: usize) -> f64 {
        self.space.dist(a, b)
    }

    fn query(&self, q: &OracleQuery) -> Result<WeightedGraph, OracleError> {
        self.build(q)
    }
}

/// Same construction as [`DoublingOracle`]; only the sparsity analysis
/// differs, so this is a thin named wrapper.
#[derive(Debug, Clone)]
pub struct CorrelationOracle(pub DoublingOracle);

impl CorrelationOracle {
    pub fn new(space: PointSet) -> Self {
        CorrelationOracle(DoublingOracle::new(space))
    }
}

impl SpannerOracle for CorrelationOracle {
    fn name(&self) -> &str {
        "correlation"
    }

    fn universe(&self) -> usize {
        self.0.universe()
    }

    fn distance(&self, a: usize, b: usize) -> f64 {
        self.0.distance(a, b)
    }

    fn query(&self, q: &OracleQuery) -> Result<WeightedGraph, OracleError> {
        self.0.build(q)
    }
}
