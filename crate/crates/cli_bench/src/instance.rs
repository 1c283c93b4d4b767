//! Seeded instance generation.

use clap::ValueEnum;
use graph_core::families::{
    complete_euclidean, grid, is_connected, lattice_points, path_plus_clique, pick_terminals, random_geometric,
    random_grid, random_tree, unit_points,
};
use graph_core::io::{round_value, GraphJson};
use graph_core::WeightedGraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Grid,
    RandomGeometric,
    Tree,
    EuclideanPoints,
    DoublingGrid,
    PathPlusClique,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceSpec {
    pub family: Family,
    pub rows: usize,
    pub cols: usize,
    /// Vertex count for the families sized by `n`.
    pub n: usize,
    pub radius: f64,
    /// Lattice side for `doubling-grid`.
    pub side: usize,
    /// Edge weights are drawn uniformly from `[lo, hi)`; `lo == hi` gives
    /// unit-style constant weights.
    pub lo: f64,
    pub hi: f64,
    pub seed: u64,
    pub terminals: Option<usize>,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            family: Family::Grid,
            rows: 5,
            cols: 5,
            n: 30,
            radius: 0.3,
            side: 6,
            lo: 1.0,
            hi: 1.0,
            seed: 0,
            terminals: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: WeightedGraph,
    pub terminals: Vec<usize>,
    pub points: Option<Vec<Vec<f64>>>,
}

const GEOMETRIC_ATTEMPTS: usize = 200;
const DEFAULT_TERMINALS: usize = 8;

pub fn generate(spec: &InstanceSpec) -> Result<Instance, CliError> {
    let usage = |m: &str| Err(CliError::Usage(m.to_string()));
    if !(spec.lo > 0.0 && spec.hi >= spec.lo && spec.hi.is_finite()) {
        return usage("weights need 0 < lo <= hi");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let weighted = spec.hi > spec.lo;
    let (graph, points, default_terms) = match spec.family {
        Family::Grid => {
            if spec.rows == 0 || spec.cols == 0 {
                return usage("grid needs rows, cols >= 1");
            }
            let g = if weighted {
                random_grid(spec.rows, spec.cols, spec.lo, spec.hi, &mut rng)
            } else {
                scale(&grid(spec.rows, spec.cols), spec.lo)
            };
            (g, None, None)
        }
        Family::RandomGeometric => {
            if spec.n == 0 || !(spec.radius > 0.0) {
                return usage("random-geometric needs n >= 1 and radius > 0");
            }
            let mut found = None;
            for _ in 0..GEOMETRIC_ATTEMPTS {
                let (g, pts) = random_geometric(spec.n, spec.radius, &mut rng);
                if is_connected(&g) {
                    found = Some((g, pts));
                    break;
                }
            }
            let Some((g, pts)) = found else {
                return usage("no connected random-geometric graph found; increase the radius");
            };
            (g, Some(pts), None)
        }
        Family::Tree => {
            if spec.n == 0 {
                return usage("tree needs n >= 1");
            }
            let g = if weighted {
                random_tree(spec.n, spec.lo, spec.hi, &mut rng)
            } else {
                scale(&unit_tree(spec.n, &mut rng), spec.lo)
            };
            (g, None, None)
        }
        Family::EuclideanPoints => {
            if spec.n == 0 {
                return usage("euclidean-points needs n >= 1");
            }
            let pts = unit_points(spec.n, 2, &mut rng);
            (complete_euclidean(&pts), Some(pts), None)
        }
        Family::DoublingGrid => {
            if spec.side == 0 {
                return usage("doubling-grid needs side >= 1");
            }
            let pts = lattice_points(spec.side);
            (complete_euclidean(&pts), Some(pts), None)
        }
        Family::PathPlusClique => {
            if spec.n == 0 {
                return usage("path-plus-clique needs n >= 1");
            }
            let (g, clique) = path_plus_clique(spec.n);
            (g, None, Some(clique))
        }
    };
    let terminals = match (spec.terminals, default_terms) {
        (Some(k), _) => {
            if k > graph.n() {
                return usage(&format!("{k} terminals requested but the graph has {} vertices", graph.n()));
            }
            pick_terminals(graph.n(), k, &mut rng)
        }
        (None, Some(t)) => t,
        (None, None) => pick_terminals(graph.n(), DEFAULT_TERMINALS.min(graph.n()), &mut rng),
    };
    Ok(Instance { graph, terminals, points })
}

fn scale(g: &WeightedGraph, w: f64) -> WeightedGraph {
    let edges: Vec<(usize, usize, f64)> = g.edges().iter().map(|e| (e.u, e.v, e.w * w)).collect();
    WeightedGraph::from_edges(g.n(), &edges).expect("scaled copy of a valid graph")
}

fn unit_tree(n: usize, rng: &mut ChaCha8Rng) -> WeightedGraph {
    use rand::Rng;
    let mut g = WeightedGraph::new(n);
    for v in 1..n {
        g.add_edge(rng.gen_range(0..v), v, 1.0).expect("tree edge");
    }
    g
}

impl Instance {
    /// Graph JSON plus the generating spec and, for point families, the
    /// coordinates. Floats are rounded to nine decimals.
    pub fn to_json(&self, spec: Option<&InstanceSpec>) -> serde_json::Value {
        let mut v = serde_json::to_value(GraphJson::from_graph(&self.graph, &self.terminals)).expect("plain data");
        v["schema"] = serde_json::json!(crate::SCHEMA);
        if let Some(s) = spec {
            v["family"] = serde_json::to_value(s.family).expect("plain data");
            v["seed"] = serde_json::json!(s.seed);
        }
        if let Some(p) = &self.points {
            v["points"] = serde_json::json!(p);
        }
        round_value(&mut v);
        v
    }

    /// Reads the JSON written by [`Instance::to_json`] or a bare graph JSON.
    pub fn from_json(text: &str) -> Result<Instance, CliError> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("json: {e}")))?;
        Instance::from_value(&v)
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Instance, CliError> {
        let g: GraphJson = serde_json::from_value(v.clone()).map_err(|e| CliError::Input(format!("graph json: {e}")))?;
        let (graph, terminals) = g.to_graph(false)?;
        let points = match v.get("points") {
            Some(p) => {
                let pts: Vec<Vec<f64>> =
                    serde_json::from_value(p.clone()).map_err(|e| CliError::Input(format!("points: {e}")))?;
                if pts.len() != graph.n() {
                    return Err(CliError::Input(format!("{} points for {} vertices", pts.len(), graph.n())));
                }
                Some(pts)
            }
            None => None,
        };
        Ok(Instance { graph, terminals, points })
    }
}
