//! Subcommand definitions and their implementations.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_core::io::{fmt9, parse_terminals, round_value, to_dot};
use graph_core::par::{self, Exec};
use graph_core::stretch::verify_stretch_with;
use graph_core::WeightedGraph;
use metric_oracles::{check_window, OracleQuery, PointSet};
use ptas_pipeline::{run_ptas, BfsLayerPartitioner, GreedyPartitioner, Partitioner, PtasOptions};
use serde_json::{json, Value};
use subset_spanner::{build_subset_spanner, SubsetOptions, SubsetSpanner, DEFAULT_G};
use treewidth_dp::{make_nice, subset_tsp_dp, DpOptions, Heuristic, TreeDecomposition};

use crate::error::exit;
use crate::instance::{generate, Family, Instance, InstanceSpec};
use crate::oracles::{graph_oracle, spanner_factory, OracleKind};
use crate::{CliError, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "spanner-forge", version, about = "Light subset spanners and subset TSP on small graphs")]
pub struct Cli {
    /// Run every data-parallel step on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Build a subset spanner.
    Spanner(SpannerArgs),
    /// Query an oracle once and check its window contract.
    Oracle(OracleArgs),
    /// Solve subset TSP exactly with the tree decomposition DP.
    Tsp(TspArgs),
    /// Run the approximation pipeline for subset TSP.
    Ptas(PtasArgs),
    /// Check the terminal stretch of a spanner against its graph.
    Verify(VerifyArgs),
    /// Build and verify spanners on a run of seeded instances.
    Batch(BatchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenFormat {
    Json,
    Dot,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HeuristicKind {
    MinFill,
    MinDegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PartitionerKind {
    Bfs,
    Greedy,
}

#[derive(Debug, Args, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value = "grid")]
    pub family: Family,
    #[arg(long, default_value_t = 5)]
    pub rows: usize,
    #[arg(long, default_value_t = 5)]
    pub cols: usize,
    #[arg(long, short = 'n', default_value_t = 30)]
    pub n: usize,
    #[arg(long, default_value_t = 0.3)]
    pub radius: f64,
    #[arg(long, default_value_t = 6)]
    pub side: usize,
    /// Lower end of the edge weight range.
    #[arg(long, default_value_t = 1.0)]
    pub lo: f64,
    /// Upper end of the edge weight range; equal to `--lo` for constant weights.
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random terminals.
    #[arg(long = "terminal-count", short = 'k')]
    pub terminal_count: Option<usize>,
}

impl FamilyArgs {
    pub fn spec(&self, seed: u64) -> InstanceSpec {
        InstanceSpec {
            family: self.family,
            rows: self.rows,
            cols: self.cols,
            n: self.n,
            radius: self.radius,
            side: self.side,
            lo: self.lo,
            hi: self.hi.unwrap_or(self.lo),
            seed,
            terminals: self.terminal_count,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: GenFormat,
}

#[derive(Debug, Args, Clone)]
pub struct InputArgs {
    /// Instance or graph JSON.
    #[arg(long)]
    pub graph: PathBuf,
    /// Terminal list file, overriding the terminals of the graph file.
    #[arg(long)]
    pub terminals: Option<PathBuf>,
    /// One point per line, comma-separated; one point per vertex.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpannerArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0.03)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "doubling")]
    pub oracle: OracleKind,
    /// Diameter constant of the cluster invariant.
    #[arg(long, default_value_t = DEFAULT_G)]
    pub g: f64,
    /// Read `--eps` as the target stretch slack.
    #[arg(long)]
    pub rescale: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "doubling")]
    pub oracle: OracleKind,
    /// Query scale; defaults to the largest terminal distance.
    #[arg(long)]
    pub ell: Option<f64>,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct TspArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Tree decomposition in PACE `.td` format.
    #[arg(long, conflicts_with = "heuristic_td")]
    pub td: Option<PathBuf>,
    /// Elimination heuristic used when no `--td` is given.
    #[arg(long, value_enum, default_value = "min-fill")]
    pub heuristic_td: HeuristicKind,
    #[arg(long, default_value_t = 12)]
    pub max_width: usize,
}

#[derive(Debug, Args)]
pub struct PtasArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Stretch parameter of the spanner stage.
    #[arg(long, default_value_t = 0.03)]
    pub spanner_eps: f64,
    #[arg(long, value_enum, default_value = "doubling")]
    pub oracle: OracleKind,
    #[arg(long, value_enum, default_value = "bfs")]
    pub partitioner: PartitionerKind,
    #[arg(long, default_value_t = 12)]
    pub max_width: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Spanner report or plain graph JSON on the same vertex set.
    #[arg(long)]
    pub spanner: PathBuf,
    #[arg(long)]
    pub terminals: Option<PathBuf>,
    /// Stretch bound; defaults to `1 + (16g+1)ε`.
    #[arg(long)]
    pub bound: Option<f64>,
    #[arg(long, default_value_t = 0.03)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_G)]
    pub g: f64,
    /// Read `--eps` as the target stretch slack.
    #[arg(long)]
    pub rescale: bool,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 10)]
    pub count: u64,
    #[arg(long, default_value_t = 0.03)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "doubling")]
    pub oracle: OracleKind,
    #[arg(long, value_enum, default_value = "json")]
    pub format: BatchFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BatchFormat {
    Json,
    Csv,
}

/// Result of one command: the text to emit and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: exit::OK }
    }

    fn json(mut v: Value, passed: bool) -> Self {
        v["schema"] = json!(SCHEMA);
        round_value(&mut v);
        let text = serde_json::to_string_pretty(&v).expect("json value") + "\n";
        Outcome { text, code: if passed { exit::OK } else { exit::VERIFY_FAILED } }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Spanner(a) => spanner(a, exec),
        Command::Oracle(a) => oracle(a),
        Command::Tsp(a) => tsp(a, exec),
        Command::Ptas(a) => ptas(a, exec),
        Command::Verify(a) => verify(a, exec),
        Command::Batch(a) => batch(a, exec),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_instance(input: &InputArgs) -> Result<Instance, CliError> {
    let mut inst = Instance::from_json(&read(&input.graph)?)?;
    if let Some(t) = &input.terminals {
        inst.terminals = parse_terminals(&read(t)?)?;
        for &t in &inst.terminals {
            inst.graph.check_vertex(t)?;
        }
    }
    if let Some(p) = &input.points {
        let pts = PointSet::parse_csv(&read(p)?)?;
        let PointSet::Coords { points, .. } = pts else { unreachable!("csv gives coordinates") };
        if points.len() != inst.graph.n() {
            return Err(CliError::Input(format!("{} points for {} vertices", points.len(), inst.graph.n())));
        }
        inst.points = Some(points);
    }
    if inst.terminals.is_empty() {
        return Err(CliError::Input("instance has no terminals".into()));
    }
    Ok(inst)
}

fn gen(a: &GenArgs) -> Result<Outcome, CliError> {
    let spec = a.family.spec(a.family.seed);
    let inst = generate(&spec)?;
    Ok(match a.format {
        GenFormat::Json => Outcome::json(inst.to_json(Some(&spec)), true),
        GenFormat::Dot => Outcome::ok(to_dot(&inst.graph, &inst.terminals)),
        GenFormat::Csv => Outcome::ok(edges_csv(&inst.graph, &(0..inst.graph.m()).collect::<Vec<_>>())),
    })
}

fn subset_options(g: f64, rescale: bool, exec: Exec) -> SubsetOptions {
    SubsetOptions { g, rescale, exec, ..SubsetOptions::default() }
}

fn build(inst: &Instance, kind: OracleKind, eps: f64, opts: &SubsetOptions) -> Result<SubsetSpanner, CliError> {
    let factory = spanner_factory(kind, inst)?;
    Ok(factory.with(|f| build_subset_spanner(&inst.graph, &inst.terminals, f, eps, opts))?)
}

fn edges_csv(g: &WeightedGraph, ids: &[usize]) -> String {
    let mut s = String::from("u,v,w\n");
    for &id in ids {
        let e = g.edge(id);
        s.push_str(&format!("{},{},{}\n", e.u, e.v, fmt9(e.w)));
    }
    s
}

fn edges_json(g: &WeightedGraph, ids: &[usize]) -> Value {
    json!(ids.iter().map(|&id| {
        let e = g.edge(id);
        json!([e.u, e.v, e.w])
    }).collect::<Vec<_>>())
}

fn spanner(a: &SpannerArgs, exec: Exec) -> Result<Outcome, CliError> {
    let inst = load_instance(&a.input)?;
    let opts = subset_options(a.g, a.rescale, exec);
    let sp = build(&inst, a.oracle, a.eps, &opts)?;
    match a.format {
        ReportFormat::Dot => {
            return Ok(Outcome::ok(to_dot(&inst.graph.edge_subgraph(sp.edge_ids.iter().copied()), &inst.terminals)))
        }
        ReportFormat::Csv => return Ok(Outcome::ok(edges_csv(&inst.graph, &sp.edge_ids))),
        ReportFormat::Json => {}
    }
    let d = &sp.diagnostics;
    Ok(Outcome::json(
        json!({
            "oracle": a.oracle,
            "eps": a.eps,
            "vertices": inst.graph.n(),
            "terminals": inst.terminals,
            "edges": edges_json(&inst.graph, &sp.edge_ids),
            "weight": d.spanner_weight,
            "lightness": d.lightness,
            "max_stretch": d.max_stretch,
            "stretch_bound": d.stretch_bound,
            "diagnostics": d.to_json(),
        }),
        d.stretch_violations == 0,
    ))
}

fn oracle(a: &OracleArgs) -> Result<Outcome, CliError> {
    let inst = load_instance(&a.input)?;
    let o = graph_oracle(a.oracle, &inst)?;
    let ell = match a.ell {
        Some(l) => l,
        None => {
            let mut far: f64 = 0.0;
            for &t in &inst.terminals {
                for d in o.distances_from(t, &inst.terminals) {
                    far = far.max(d);
                }
            }
            if far > 0.0 {
                far
            } else {
                1.0
            }
        }
    };
    let q = OracleQuery::new(inst.terminals.clone(), ell, a.eps)?;
    let out = o.query(&q)?;
    let report = check_window(o.as_ref(), &q, &out);
    let passed = report.passed() && report.stats.eq3_holds();
    Ok(Outcome::json(
        json!({
            "oracle": a.oracle,
            "ell": ell,
            "eps": a.eps,
            "pairs_in_window": report.pairs_in_window,
            "violations": report.violations,
            "worst_ratio": report.worst_ratio,
            "long_edges": report.long_edges,
            "eq3": report.stats.eq3_holds(),
            "stats": report.stats,
            "passed": passed,
        }),
        passed,
    ))
}

fn tsp(a: &TspArgs, exec: Exec) -> Result<Outcome, CliError> {
    let inst = load_instance(&a.input)?;
    let opts = DpOptions { max_width: a.max_width, exec, ..DpOptions::default() };
    let sol = match &a.td {
        Some(p) => {
            let td = TreeDecomposition::from_pace(&read(p)?)?;
            td.validate(&inst.graph)?;
            let nice = make_nice(&td, &inst.graph)?;
            subset_tsp_dp(&inst.graph, &inst.terminals, &nice, &opts)?
        }
        None => {
            let rule = match a.heuristic_td {
                HeuristicKind::MinFill => Heuristic::MinFill,
                HeuristicKind::MinDegree => Heuristic::MinDegree,
            };
            let nice = make_nice(&TreeDecomposition::heuristic(&inst.graph, rule), &inst.graph)?;
            subset_tsp_dp(&inst.graph, &inst.terminals, &nice, &opts)?
        }
    };
    let mut v = sol.to_json(&inst.graph);
    v["terminals"] = json!(inst.terminals);
    v["stats"] = serde_json::to_value(&sol.stats).expect("plain data");
    Ok(Outcome::json(v, true))
}

fn ptas(a: &PtasArgs, exec: Exec) -> Result<Outcome, CliError> {
    let inst = load_instance(&a.input)?;
    let factory = spanner_factory(a.oracle, &inst)?;
    let partitioner: &dyn Partitioner = match a.partitioner {
        PartitionerKind::Bfs => &BfsLayerPartitioner,
        PartitionerKind::Greedy => &GreedyPartitioner,
    };
    let opts = PtasOptions {
        spanner_eps: a.spanner_eps,
        subset: subset_options(DEFAULT_G, false, exec),
        dp: DpOptions { max_width: a.max_width, exec, ..DpOptions::default() },
        ..PtasOptions::default()
    };
    let res = factory.with(|f| run_ptas(&inst.graph, &inst.terminals, a.eps, f, partitioner, &opts))?;
    let mut v = res.to_json(&inst.graph);
    v["weight"] = json!(res.weight);
    v["terminals"] = json!(inst.terminals);
    Ok(Outcome::json(v, true))
}

fn verify(a: &VerifyArgs, exec: Exec) -> Result<Outcome, CliError> {
    let inst = load_instance(&InputArgs { graph: a.graph.clone(), terminals: a.terminals.clone(), points: None })?;
    let sp = Instance::from_json(&read(&a.spanner)?)?;
    if sp.graph.n() != inst.graph.n() {
        return Err(CliError::Input(format!(
            "spanner has {} vertices but the graph has {}",
            sp.graph.n(),
            inst.graph.n()
        )));
    }
    let bound = match a.bound {
        Some(b) => b,
        None => {
            let s = 16.0 * a.g + 1.0;
            if a.rescale {
                1.0 + a.eps
            } else {
                1.0 + s * a.eps
            }
        }
    };
    if !(bound >= 1.0) {
        return Err(CliError::Usage(format!("stretch bound must be at least 1, got {bound}")));
    }
    let r = verify_stretch_with(&sp.graph, &inst.graph, &inst.terminals, bound, exec)?;
    Ok(Outcome::json(
        json!({
            "max_stretch": r.max_stretch,
            "worst_pair": r.worst_pair,
            "bound": r.bound,
            "pairs": r.per_pair.len(),
            "violations": r.violations,
            "spanner_weight": sp.graph.total_weight(),
            "passed": r.passed(),
        }),
        r.passed(),
    ))
}

fn batch(a: &BatchArgs, exec: Exec) -> Result<Outcome, CliError> {
    let seeds: Vec<u64> = (0..a.count).map(|i| a.family.seed + i).collect();
    let opts = subset_options(DEFAULT_G, false, exec);
    let rows = par::map(exec, &seeds, |&seed| -> Result<Value, CliError> {
        let spec = a.family.spec(seed);
        let inst = generate(&spec)?;
        let sp = build(&inst, a.oracle, a.eps, &SubsetOptions { exec: Exec::Sequential, ..opts })?;
        let sub = inst.graph.edge_subgraph(sp.edge_ids.iter().copied());
        let bound = 1.0 + opts.stretch_constant() * a.eps;
        let r = verify_stretch_with(&sub, &inst.graph, &inst.terminals, bound, Exec::Sequential)?;
        Ok(json!({
            "seed": seed,
            "vertices": inst.graph.n(),
            "edges": inst.graph.m(),
            "terminals": inst.terminals.len(),
            "spanner_edges": sp.edge_ids.len(),
            "lightness": sp.diagnostics.lightness,
            "max_stretch": r.max_stretch,
            "bound": bound,
            "passed": r.passed(),
        }))
    });
    let rows: Vec<Value> = rows.into_iter().collect::<Result<_, _>>()?;
    let failed = rows.iter().filter(|r| r["passed"] != json!(true)).count();
    if a.format == BatchFormat::Csv {
        let cols = ["seed", "vertices", "edges", "terminals", "spanner_edges", "lightness", "max_stretch", "bound", "passed"];
        let mut s = cols.join(",") + "\n";
        for r in &rows {
            let cells: Vec<String> = cols
                .iter()
                .map(|c| match &r[*c] {
                    Value::Number(x) if x.is_f64() => fmt9(x.as_f64().expect("float")),
                    other => other.to_string(),
                })
                .collect();
            s.push_str(&(cells.join(",") + "\n"));
        }
        let code = if failed == 0 { exit::OK } else { exit::VERIFY_FAILED };
        return Ok(Outcome { text: s, code });
    }
    Ok(Outcome::json(
        json!({
            "family": a.family.family,
            "oracle": a.oracle,
            "eps": a.eps,
            "instances": rows,
            "failed": failed,
        }),
        failed == 0,
    ))
}
