//! Choosing a spanner oracle by name.

use clap::ValueEnum;
use graph_core::{shortest_paths, TerminalMetric, WeightedGraph};
use metric_oracles::{
    CorrelationOracle, DoublingOracle, EuclideanOracle, IdentityProvider, MinorOracle, OracleError, PointSet,
    SpannerOracle, TreeMinorProvider,
};
use separator_spanner::{CentroidProvider, SeparatorOracle, SptCycleProvider};
use serde::Serialize;
use subset_spanner::{doubling_oracle, GraphOracle, MetricOracle, OracleFactory};

use crate::instance::Instance;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Euclidean,
    Doubling,
    Correlation,
    Minor,
    Separator,
}

/// An oracle factory that owns whatever it borrows.
pub enum Factory {
    Metric(Box<dyn OracleFactory>),
    Graph(Box<dyn SpannerOracle>),
}

impl Factory {
    pub fn with<R>(&self, f: impl FnOnce(&dyn OracleFactory) -> R) -> R {
        match self {
            Factory::Metric(m) => f(m.as_ref()),
            Factory::Graph(o) => f(&GraphOracle(o.as_ref())),
        }
    }
}

fn need_points(inst: &Instance) -> Result<Vec<Vec<f64>>, CliError> {
    inst.points
        .clone()
        .ok_or_else(|| CliError::Usage("the euclidean oracle needs coordinates (--points or a point instance)".into()))
}

/// Oracle factory for the subset spanner. Metric oracles run on the terminal
/// metric; the minor and separator oracles run on the whole graph.
pub fn spanner_factory(kind: OracleKind, inst: &Instance) -> Result<Factory, CliError> {
    Ok(match kind {
        OracleKind::Doubling => Factory::Metric(Box::new(doubling_oracle())),
        OracleKind::Correlation => Factory::Metric(Box::new(MetricOracle(|m: &TerminalMetric| {
            Ok(Box::new(CorrelationOracle::new(PointSet::from_metric(m))) as Box<dyn SpannerOracle>)
        }))),
        OracleKind::Euclidean => {
            let pts = need_points(inst)?;
            Factory::Metric(Box::new(MetricOracle(move |m: &TerminalMetric| {
                let sub = m.terminals.iter().map(|&t| pts[t].clone()).collect();
                Ok(Box::new(EuclideanOracle::new(PointSet::from_coords(sub)?)?) as Box<dyn SpannerOracle>)
            })))
        }
        OracleKind::Minor | OracleKind::Separator => Factory::Graph(graph_oracle(kind, inst)?),
    })
}

/// Oracle whose universe is the vertex set of the instance graph.
pub fn graph_oracle(kind: OracleKind, inst: &Instance) -> Result<Box<dyn SpannerOracle>, CliError> {
    let g = inst.graph.clone();
    Ok(match kind {
        OracleKind::Doubling => Box::new(DoublingOracle::new(graph_metric(&g)?)),
        OracleKind::Correlation => Box::new(CorrelationOracle::new(graph_metric(&g)?)),
        OracleKind::Euclidean => Box::new(EuclideanOracle::new(PointSet::from_coords(need_points(inst)?)?)?),
        OracleKind::Minor if g.is_forest() => Box::new(MinorOracle::new(g, TreeMinorProvider)),
        OracleKind::Minor => Box::new(MinorOracle::new(g, IdentityProvider)),
        OracleKind::Separator if g.is_forest() => Box::new(SeparatorOracle::new(g, CentroidProvider)),
        OracleKind::Separator => Box::new(SeparatorOracle::new(g, SptCycleProvider::default())),
    })
}

/// All-pairs shortest-path metric of a connected graph.
pub fn graph_metric(g: &WeightedGraph) -> Result<PointSet, CliError> {
    let mut rows: Vec<Vec<f64>> = (0..g.n()).map(|v| shortest_paths(g, v).map(|sp| sp.dist)).collect::<Result<_, _>>()?;
    for a in 0..g.n() {
        for b in 0..a {
            let d = rows[a][b].min(rows[b][a]);
            if !d.is_finite() {
                return Err(CliError::Input("graph is disconnected".into()));
            }
            rows[a][b] = d;
            rows[b][a] = d;
        }
    }
    PointSet::from_matrix(rows).map_err(|e: OracleError| CliError::Input(e.to_string()))
}
