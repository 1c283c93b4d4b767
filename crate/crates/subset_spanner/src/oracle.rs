//! Binding a spanner oracle to the terminals of one construction.

use graph_core::{TerminalMetric, WeightedGraph};
use metric_oracles::{DoublingOracle, OracleError, OracleQuery, OracleStats, PointSet, SpannerOracle};

use crate::error::SubsetError;

/// An oracle ready to answer queries on terminal indices.
pub enum BoundOracle<'a> {
    /// Universe is the terminal list; an output edge `(a, b)` stands for the
    /// witness path κ(a, b).
    OnMetric(Box<dyn SpannerOracle + 'a>),
    /// Universe is the graph's vertex set; output edges are graph edges.
    OnGraph(&'a dyn SpannerOracle),
}

impl BoundOracle<'_> {
    pub fn name(&self) -> &str {
        match self {
            BoundOracle::OnMetric(o) => o.name(),
            BoundOracle::OnGraph(o) => o.name(),
        }
    }

    /// Query the oracle on terminal indices `reps` at scale `ell`. Returns
    /// the graph edges of the answer and the answer's sparsity figures.
    pub fn query(
        &self,
        graph: &WeightedGraph,
        metric: &TerminalMetric,
        reps: &[usize],
        ell: f64,
        eps: f64,
    ) -> Result<(Vec<usize>, OracleStats), SubsetError> {
        let context = |source: OracleError| SubsetError::Oracle {
            context: format!("{} terminals at scale {ell}", reps.len()),
            source,
        };
        match self {
            BoundOracle::OnMetric(o) => {
                let q = OracleQuery::new(reps.to_vec(), ell, eps).map_err(context)?;
                let out = o.query(&q).map_err(context)?;
                let ids = out.edges().iter().flat_map(|e| metric.kappa_edges(e.u, e.v).iter().copied()).collect();
                Ok((ids, OracleStats::of(&out, &q)))
            }
            BoundOracle::OnGraph(o) => {
                let verts: Vec<usize> = reps.iter().map(|&r| metric.terminals[r]).collect();
                let q = OracleQuery::new(verts, ell, eps).map_err(context)?;
                let out = o.query(&q).map_err(context)?;
                let ids = out
                    .edges()
                    .iter()
                    .map(|e| {
                        graph.edge_between(e.u, e.v).ok_or_else(|| {
                            context(OracleError::ContractViolation(format!(
                                "edge ({}, {}) is not in the graph",
                                e.u, e.v
                            )))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((ids, OracleStats::of(&out, &q)))
            }
        }
    }
}

/// Produces a bound oracle once the terminal metric is known.
pub trait OracleFactory: Sync {
    fn bind<'a>(&'a self, graph: &WeightedGraph, metric: &TerminalMetric) -> Result<BoundOracle<'a>, OracleError>;
}

type MakeOracle = fn(&TerminalMetric) -> Result<Box<dyn SpannerOracle>, OracleError>;

/// Factory running the doubling-metric oracle on the terminal metric.
pub fn doubling_oracle() -> MetricOracle<MakeOracle> {
    fn make(m: &TerminalMetric) -> Result<Box<dyn SpannerOracle>, OracleError> {
        Ok(Box::new(DoublingOracle::new(PointSet::from_metric(m))))
    }
    MetricOracle(make)
}

/// Factory building an oracle over the terminal metric with a closure.
pub struct MetricOracle<F>(pub F);

impl<F> OracleFactory for MetricOracle<F>
where
    F: Fn(&TerminalMetric) -> Result<Box<dyn SpannerOracle>, OracleError> + Sync,
{
    fn bind<'a>(&'a self, _graph: &WeightedGraph, metric: &TerminalMetric) -> Result<BoundOracle<'a>, OracleError> {
        Ok(BoundOracle::OnMetric((self.0)(metric)?))
    }
}

/// Factory reusing one oracle whose universe is the graph itself.
pub struct GraphOracle<'o>(pub &'o dyn SpannerOracle);

impl OracleFactory for GraphOracle<'_> {
    fn bind<'a>(&'a self, graph: &WeightedGraph, _metric: &TerminalMetric) -> Result<BoundOracle<'a>, OracleError> {
        if self.0.universe() != graph.n() {
            return Err(OracleError::InvalidQuery(format!(
                "oracle universe {} differs from the graph's {} vertices",
                self.0.universe(),
                graph.n()
            )));
        }
        Ok(BoundOracle::OnGraph(self.0))
    }
}
