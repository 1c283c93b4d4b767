//! The oracle abstraction, query validation and sparsity measurement.

use serde::{Deserialize, Serialize};

use graph_core::par::{self, Exec};
use graph_core::{shortest_paths, tol, WeightedGraph};

use crate::error::OracleError;

/// Lower end of the preservation window as a fraction of `ℓ`.
pub const WINDOW_LOW: f64 = 1.0 / 8.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleQuery {
    pub terminals: Vec<usize>,
    pub ell: f64,
    pub eps: f64,
}

impl OracleQuery {
    pub fn new(terminals: Vec<usize>, ell: f64, eps: f64) -> Result<Self, OracleError> {
        if !(ell.is_finite() && ell > 0.0) {
            return Err(OracleError::InvalidQuery(format!("scale must be positive, got {ell}")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(OracleError::InvalidQuery(format!("epsilon must lie in (0, 1), got {eps}")));
        }
        if terminals.is_empty() {
            return Err(OracleError::InvalidQuery("terminal list is empty".into()));
        }
        let mut sorted = terminals.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(OracleError::InvalidQuery(format!("duplicate terminal {}", w[0])));
        }
        Ok(OracleQuery { terminals, ell, eps })
    }

    pub fn check_universe(&self, universe: usize) -> Result<(), OracleError> {
        match self.terminals.iter().find(|&&t| t >= universe) {
            Some(t) => Err(OracleError::InvalidQuery(format!("terminal {t} outside a universe of {universe}"))),
            None => Ok(()),
        }
    }

    /// Whether a distance falls in the window `[ℓ/8, ℓ]`.
    pub fn in_window(&self, d: f64) -> bool {
        d >= self.ell * WINDOW_LOW * (1.0 - tol::REL_TOL) && tol::within(d, self.ell)
    }
}

/// A spanner oracle over a fixed universe of ids `0..universe()`.
pub trait SpannerOracle: Sync {
    fn name(&self) -> &str;

    fn universe(&self) -> usize;

    /// Distance in the underlying space.
    fn distance(&self, a: usize, b: usize) -> f64;

    /// Distances from `a` to each of `targets`.
    fn distances_from(&self, a: usize, targets: &[usize]) -> Vec<f64> {
        targets.iter().map(|&b| self.distance(a, b)).collect()
    }

    /// Answer a validated query with a graph on `0..universe()`.
    fn query(&self, q: &OracleQuery) -> Result<WeightedGraph, OracleError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleStats {
    pub weight: f64,
    pub edge_count: usize,
    pub terminal_count: usize,
    pub weak_ratio: f64,
    pub strong_ratio: f64,
    pub max_edge: f64,
}

impl OracleStats {
    pub fn of(output: &WeightedGraph, q: &OracleQuery) -> Self {
        let t = q.terminals.len();
        let weight = output.total_weight();
        let edge_count = output.m();
        OracleStats {
            weight,
            edge_count,
            terminal_count: t,
            weak_ratio: weight / (t as f64 * q.ell),
            strong_ratio: edge_count as f64 / t as f64,
            max_edge: output.edges().iter().map(|e| e.w).fold(0.0, f64::max),
        }
    }

    /// `weight <= 2ℓ · edges`, i.e. weak ratio at most twice the strong ratio.
    pub fn eq3_holds(&self) -> bool {
        tol::within(self.weak_ratio, 2.0 * self.strong_ratio)
    }
}

/// Outcome of checking one oracle answer against the window contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub pairs_in_window: usize,
    pub violations: usize,
    pub worst_ratio: f64,
    pub long_edges: usize,
    pub stats: OracleStats,
}

impl WindowReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.long_edges == 0
    }
}

/// Check an oracle answer: window pairs within `1 + ε`, no edge over `2ℓ`.
pub fn check_window(oracle: &dyn SpannerOracle, q: &OracleQuery, output: &WeightedGraph) -> WindowReport {
    let stats = OracleStats::of(output, q);
    let long_edges = output.edges().iter().filter(|e| !tol::within(e.w, 2.0 * q.ell)).count();
    let mut pairs_in_window = 0;
    let mut violations = 0;
    let mut worst_ratio: f64 = 1.0;
    for (i, &a) in q.terminals.iter().enumerate() {
        let rest = &q.terminals[i + 1..];
        if rest.is_empty() {
            continue;
        }
        let truth = oracle.distances_from(a, rest);
        let out = shortest_paths(output, a).expect("terminal inside universe").dist;
        for (j, &b) in rest.iter().enumerate() {
            let d = truth[j];
            if !q.in_window(d) {
                continue;
            }
            pairs_in_window += 1;
            let ratio = out[b] / d;
            worst_ratio = worst_ratio.max(ratio);
            if !tol::within(out[b], (1.0 + q.eps) * d) {
                violations += 1;
            }
        }
    }
    WindowReport { pairs_in_window, violations, worst_ratio, long_edges, stats }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsityReport {
    pub weak: f64,
    pub strong: f64,
    pub per_query: Vec<OracleStats>,
}

/// Run every query and report the largest weak and strong ratios seen.
pub fn measure_sparsity(
    oracle: &dyn SpannerOracle,
    batch: &[OracleQuery],
    exec: Exec,
) -> Result<SparsityReport, OracleError> {
    if batch.is_empty() {
        return Err(OracleError::InvalidQuery("empty query batch".into()));
    }
    let results = par::map(exec, batch, |q| oracle.query(q).map(|g| OracleStats::of(&g, q)));
    let per_query: Vec<OracleStats> = results.into_iter().collect::<Result<_, _>>()?;
    let weak = per_query.iter().map(|s| s.weak_ratio).fold(0.0, f64::max);
    let strong = per_query.iter().map(|s| s.strong_ratio).fold(0.0, f64::max);
    Ok(SparsityReport { weak, strong, per_query })
}
