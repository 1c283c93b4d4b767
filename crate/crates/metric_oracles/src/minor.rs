//! Oracle built from a distance-preserving minor and decompression.

use std::collections::BTreeMap;

use graph_core::steiner::prune_leaves;
use graph_core::{shortest_paths, tol, WeightedGraph};

use crate::error::OracleError;
use crate::oracle::{OracleQuery, SpannerOracle};

/// A minor of a host graph. Vertex `i` of `graph` stands for host vertex
/// `origin[i]`; an edge stands for a host path of at least its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Minor {
    pub graph: WeightedGraph,
    pub origin: Vec<usize>,
}

impl Minor {
    /// Minor vertices that are not terminals.
    pub fn steiner_count(&self, terminals: &[usize]) -> usize {
        self.origin.iter().filter(|v| !terminals.contains(v)).count()
    }
}

/// Supplies a minor that keeps the terminals and their distances within
/// `1 + ε`.
pub trait MinorProvider: Sync {
    fn name(&self) -> &str;
    fn minor(&self, host: &WeightedGraph, terminals: &[usize], eps: f64) -> Result<Minor, OracleError>;
}

/// The host graph itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityProvider;

impl MinorProvider for IdentityProvider {
    fn name(&self) -> &str {
        "identity"
    }

    fn minor(&self, host: &WeightedGraph, _terminals: &[usize], _eps: f64) -> Result<Minor, OracleError> {
        Ok(Minor { graph: host.clone(), origin: (0..host.n()).collect() })
    }
}

/// Exact minor for forests: restrict to the union of terminal paths and
/// splice out every non-terminal of degree two.
#[derive(Debug, Clone, Copy, Default)]
pub struct TreeMinorProvider;

impl MinorProvider for TreeMinorProvider {
    fn name(&self) -> &str {
        "tree"
    }

    fn minor(&self, host: &WeightedGraph, terminals: &[usize], _eps: f64) -> Result<Minor, OracleError> {
        if !host.is_forest() {
            return Err(OracleError::InvalidQuery("tree minor provider needs a forest".into()));
        }
        let pruned = prune_leaves(host, terminals);
        let n = host.n();
        let mut is_term = vec![false; n];
        for &t in terminals {
            is_term[t] = true;
        }
        let keep: Vec<usize> = (0..n).filter(|&v| is_term[v] || pruned.degree(v) >= 3).collect();
        let mut local = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let mut g = WeightedGraph::new(keep.len());
        for &start in &keep {
            for &(first, eid) in pruned.neighbors(start) {
                let (mut prev, mut cur, mut w) = (start, first, pruned.edge(eid).w);
                while local[cur] == usize::MAX {
                    let &(next, nid) = pruned
                        .neighbors(cur)
                        .iter()
                        .find(|&&(x, _)| x != prev)
                        .expect("interior chain vertex has degree two");
                    w += pruned.edge(nid).w;
                    prev = cur;
                    cur = next;
                }
                if start < cur {
                    g.add_edge(local[start], local[cur], w)?;
                }
            }
        }
        Ok(Minor { graph: g, origin: keep })
    }
}

/// Query the provider, drop minor edges of length at least `2ℓ`, and
/// replace each survivor by a host shortest path.
pub struct MinorOracle<P> {
    host: WeightedGraph,
    provider: P,
}

impl<P: MinorProvider> MinorOracle<P> {
    pub fn new(host: WeightedGraph, provider: P) -> Self {
        MinorOracle { host, provider }
    }

    pub fn host(&self) -> &WeightedGraph {
        &self.host
    }

    /// Validate the provider's answer against the host.
    fn check_minor(&self, minor: &Minor, terminals: &[usize]) -> Result<(), OracleError> {
        let mut seen = vec![false; self.host.n()];
        for &o in &minor.origin {
            if o >= self.host.n() || seen[o] {
                return Err(OracleError::ContractViolation(format!("bad or repeated origin vertex {o}")));
            }
            seen[o] = true;
        }
        if minor.origin.len() != minor.graph.n() {
            return Err(OracleError::ContractViolation("origin map length differs from minor size".into()));
        }
        if let Some(t) = terminals.iter().find(|&&t| !seen[t]) {
            return Err(OracleError::ContractViolation(format!("terminal {t} missing from minor")));
        }
        Ok(())
    }
}

impl<P: MinorProvider> SpannerOracle for MinorOracle<P> {
    fn name(&self) -> &str {
        "minor"
    }

    fn universe(&self) -> usize {
        self.host.n()
    }

    fn distance(&self, a: usize, b: usize) -> f64 {
        shortest_paths(&self.host, a).expect("vertex in host").dist[b]
    }

    fn distances_from(&self, a: usize, targets: &[usize]) -> Vec<f64> {
        let d = shortest_paths(&self.host, a).expect("vertex in host").dist;
        targets.iter().map(|&b| d[b]).collect()
    }

    fn query(&self, q: &OracleQuery) -> Result<WeightedGraph, OracleError> {
        q.check_universe(self.host.n())?;
        let minor = self.provider.minor(&self.host, &q.terminals, q.eps)?;
        self.check_minor(&minor, &q.terminals)?;
        let mut by_source: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
        for e in minor.graph.edges() {
            let (a, b) = (minor.origin[e.u], minor.origin[e.v]);
            by_source.entry(a.min(b)).or_default().push((a.max(b), e.w));
        }
        let mut ids = Vec::new();
        for (a, targets) in by_source {
            let sp = shortest_paths(&self.host, a)?;
            for (b, w) in targets {
                let d = sp.dist[b];
                if !d.is_finite() || tol::definitely_less(w, d) {
                    return Err(OracleError::ContractViolation(format!(
                        "minor edge ({a}, {b}) of weight {w} is shorter than host distance {d}"
                    )));
                }
                if w >= 2.0 * q.ell {
                    continue;
                }
                ids.extend(sp.edge_path_to(b).expect("reachable"));
            }
        }
        Ok(self.host.edge_subgraph(ids))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spider() -> WeightedGraph {
        // center 0, legs 0-1-2, 0-3-4, 0-5
        WeightedGraph::from_edges(6, &[(0, 1, 1.0), (1, 2, 1.0), (0, 3, 2.0), (3, 4, 2.0), (0, 5, 1.0)]).unwrap()
    }

    #[test]
    fn tree_minor_splices_chains() {
        let m = TreeMinorProvider.minor(&spider(), &[2, 4, 5], 0.1).unwrap();
        assert_eq!(m.origin, vec![0, 2, 4, 5]);
        assert_eq!(m.graph.m(), 3);
        assert_eq!(m.graph.total_weight(), 7.0);
        assert_eq!(m.steiner_count(&[2, 4, 5]), 1);
    }

    #[test]
    fn identity_on_tree_prunes_long_edges() {
        let o = MinorOracle::new(spider(), IdentityProvider);
        let q = OracleQuery::new(vec![2, 4, 5], 1.0, 0.5).unwrap();
        let g = o.query(&q).unwrap();
        assert_eq!(g.m(), 3);
        assert!(g.edges().iter().all(|e| e.w < 2.0));
    }

    struct Cheater;
    impl MinorProvider for Cheater {
        fn name(&self) -> &str {
            "cheater"
        }
        fn minor(&self, host: &WeightedGraph, _t: &[usize], _e: f64) -> Result<Minor, OracleError> {
            let mut g = WeightedGraph::new(2);
            g.add_edge(0, 1, 0.5)?;
            let _ = host;
            Ok(Minor { graph: g, origin: vec![2, 4] })
        }
    }

    #[test]
    fn shrinkage_is_a_contract_violation() {
        let o = MinorOracle::new(spider(), Cheater);
        let q = OracleQuery::new(vec![2, 4], 10.0, 0.5).unwrap();
        assert!(matches!(o.query(&q), Err(OracleError::ContractViolation(_))));
    }
}
