//! The oracle-to-light-spanner construction.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use graph_core::metric::metric_completion_with;
use graph_core::par::{self, Exec};
use graph_core::stretch::verify_stretch_with;
use graph_core::{metric_mst, tol, MetricEdge, TerminalMetric, WeightedGraph};

use crate::buckets::{bucket_edges, EdgeBuckets};
use crate::clusters::{build_cluster_graph, level0_clusters, member_diameter, ClusterTree, EdgeSet};
use crate::error::SubsetError;
use crate::ledger::{edge_credit, rational, to_f64, CreditLedger};
use crate::oracle::{BoundOracle, OracleFactory};
use crate::phases::{cluster_level, LevelParams};

pub const DEFAULT_G: f64 = 29.0;

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetOptions {
    /// Diameter constant of the cluster invariant.
    pub g: f64,
    /// Safety factor `a` in `c(ε) = a·max(Ws·ε⁻², g·ε⁻³)`.
    pub safety: f64,
    /// Weak sparsity used for `c(ε)`; estimated from a calibration batch when absent.
    pub ws_estimate: Option<f64>,
    /// Treat the given ε as the target stretch slack and run with `ε/(16g+1)`.
    pub rescale: bool,
    pub exec: Exec,
}

impl Default for SubsetOptions {
    fn default() -> Self {
        SubsetOptions { g: DEFAULT_G, safety: 1.0, ws_estimate: None, rescale: false, exec: Exec::Parallel }
    }
}

impl SubsetOptions {
    /// The constant `s = 16g + 1` of the stretch guarantee `1 + sε`.
    pub fn stretch_constant(&self) -> f64 {
        16.0 * self.g + 1.0
    }
}

/// A cluster of one level of the hierarchy.
#[derive(Debug, Clone, Serialize)]
pub struct Cluster {
    /// Terminal indices, sorted.
    pub terminals: Vec<usize>,
    /// Graph edges of the member subgraph, sorted.
    pub members: Vec<usize>,
    pub diameter: f64,
    /// Clusters of the level below.
    pub children: Vec<usize>,
    /// Forming phase (1 to 4), 0 on the base level.
    pub phase: u8,
    /// Balance at formation, before this level's purchases are paid.
    #[serde(serialize_with = "ser_rational")]
    pub credit: BigRational,
    #[serde(skip)]
    account: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Level {
    pub index: usize,
    pub ell: f64,
    pub clusters: Vec<Cluster>,
}

/// Clusters of one scale class, level by level.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterHierarchy {
    pub class: usize,
    pub levels: Vec<Level>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LevelDiagnostics {
    pub class: usize,
    pub level: usize,
    pub ell: f64,
    pub bucket_edges: usize,
    pub k_edges: usize,
    pub k_removed: usize,
    pub high_nodes: usize,
    pub edges_bought: usize,
    pub weight_bought: f64,
    pub clusters: usize,
    pub clusters_by_phase: [usize; 4],
    pub max_diameter: f64,
    pub dc1_violations: usize,
    pub dc2_violations: usize,
    pub repairs: usize,
    pub deferred: f64,
    pub ledger_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerSummary {
    pub class: usize,
    #[serde(serialize_with = "ser_rational")]
    pub minted: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub spent: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub residual: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub min_balance: BigRational,
    pub conserved: bool,
    pub events: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SpannerDiagnostics {
    /// Spanner weight over the weight of the terminal MST.
    pub lightness: f64,
    pub max_stretch: f64,
    pub stretch_bound: f64,
    pub stretch_violations: usize,
    pub oracle_calls: usize,
    pub calibration_calls: usize,
    /// Number of (class, level) pairs processed above the base level.
    pub levels: usize,
    pub per_level: Vec<LevelDiagnostics>,
    pub eps: f64,
    pub w0: f64,
    pub mst_weight: f64,
    pub spanner_weight: f64,
    pub cheap_edges: usize,
    pub direct_edges: usize,
    pub bucketed_edges: usize,
    pub prelude_weight: f64,
    pub final_repairs: usize,
    pub ws_estimate: f64,
    pub ws_observed: f64,
    pub credit_rate: f64,
    pub ledgers: Vec<LedgerSummary>,
}

impl SpannerDiagnostics {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("diagnostics serialise")
    }

    pub fn dc1_violations(&self) -> usize {
        self.per_level.iter().map(|l| l.dc1_violations).sum()
    }

    pub fn dc2_violations(&self) -> usize {
        self.per_level.iter().map(|l| l.dc2_violations).sum()
    }

    pub fn repairs(&self) -> usize {
        self.final_repairs + self.per_level.iter().map(|l| l.repairs).sum::<usize>()
    }
}

/// Result of [`build_subset_spanner`].
#[derive(Debug, Clone)]
pub struct SubsetSpanner {
    pub graph: WeightedGraph,
    /// Graph edge ids of the spanner, sorted.
    pub edge_ids: Vec<usize>,
    pub diagnostics: SpannerDiagnostics,
    pub hierarchies: Vec<ClusterHierarchy>,
    pub ledgers: Vec<CreditLedger>,
    pub buckets: EdgeBuckets,
    pub metric: TerminalMetric,
    pub mst: Vec<MetricEdge>,
}

struct Ctx<'a> {
    graph: &'a WeightedGraph,
    metric: &'a TerminalMetric,
    mst: &'a [MetricEdge],
    buckets: &'a EdgeBuckets,
    base: &'a EdgeSet,
    oracle: &'a BoundOracle<'a>,
    eps: f64,
    g: f64,
    s: f64,
    c: BigRational,
}

struct ClassRun {
    added: Vec<usize>,
    hierarchy: ClusterHierarchy,
    ledger: CreditLedger,
    diags: Vec<LevelDiagnostics>,
    oracle_calls: usize,
    ws_observed: f64,
}

/// Build a subset spanner of `graph` on `terminals` from a spanner oracle.
///
/// Every terminal pair ends up within `1 + (16g+1)ε` of its graph distance.
/// With `options.rescale` the given `eps` is the target slack and the
/// construction runs with `eps/(16g+1)`.
pub fn build_subset_spanner(
    graph: &WeightedGraph,
    terminals: &[usize],
    factory: &dyn OracleFactory,
    eps: f64,
    options: &SubsetOptions,
) -> Result<SubsetSpanner, SubsetError> {
    let g = options.g;
    let s = options.stretch_constant();
    let eps = if options.rescale { eps / s } else { eps };
    if !(eps > 0.0 && eps < 1.0 / g) {
        return Err(SubsetError::Input(format!("epsilon must lie in (0, 1/{g}), got {eps}")));
    }
    if terminals.is_empty() {
        return Err(SubsetError::Input("terminal list is empty".into()));
    }
    let exec = options.exec;
    let metric = metric_completion_with(graph, terminals, exec)?;
    let mst = metric_mst(&metric)?;
    let mst_weight: f64 = mst.iter().map(|e| e.w).sum();
    let buckets = bucket_edges(&metric, mst_weight, eps);

    let mut base = EdgeSet::new(graph.m());
    for e in mst.iter().chain(&buckets.cheap).chain(&buckets.direct) {
        base.extend(graph, metric.kappa_edges(e.i, e.j).iter().copied());
    }
    let prelude_weight = base.weight(graph);

    let mut diag = SpannerDiagnostics {
        eps,
        w0: buckets.w0,
        mst_weight,
        cheap_edges: buckets.cheap.len(),
        direct_edges: buckets.direct.len(),
        bucketed_edges: buckets.bucketed_count(),
        prelude_weight,
        stretch_bound: 1.0 + s * eps,
        ..Default::default()
    };
    let mut hierarchies = Vec::new();
    let mut ledgers = Vec::new();
    let mut spanner = base.clone();

    if buckets.bucketed_count() > 0 {
        let oracle = factory.bind(graph, &metric).map_err(|source| SubsetError::Oracle {
            context: "binding the oracle".into(),
            source,
        })?;
        let ws = match options.ws_estimate {
            Some(w) => w,
            None => {
                let all: Vec<usize> = (0..metric.k()).collect();
                let mut ws: f64 = 1.0;
                for i in 1..=buckets.top_level {
                    let (_, stats) = oracle.query(graph, &metric, &all, 2.0 * buckets.ell(0, i), eps)?;
                    diag.calibration_calls += 1;
                    ws = ws.max(stats.weak_ratio);
                }
                ws
            }
        };
        let c = options.safety * (ws / (eps * eps)).max(g / (eps * eps * eps));
        diag.ws_estimate = ws;
        diag.credit_rate = c;
        let ctx = Ctx {
            graph,
            metric: &metric,
            mst: &mst,
            buckets: &buckets,
            base: &base,
            oracle: &oracle,
            eps,
            g,
            s,
            c: rational(c),
        };
        let runs = par::map_range(exec, buckets.classes, |j| run_class(&ctx, j));
        for run in runs {
            let Some(run) = run? else { continue };
            spanner.extend(graph, run.added.iter().copied());
            diag.oracle_calls += run.oracle_calls;
            diag.ws_observed = diag.ws_observed.max(run.ws_observed);
            diag.levels += run.diags.iter().filter(|d| d.level > 0).count();
            diag.per_level.extend(run.diags);
            diag.ledgers.push(LedgerSummary {
                class: run.hierarchy.class,
                minted: run.ledger.minted().clone(),
                spent: run.ledger.spent().clone(),
                residual: run.ledger.residual(),
                min_balance: run.ledger.min_balance(),
                conserved: run.ledger.conserved(),
                events: run.ledger.events().len(),
            });
            hierarchies.push(run.hierarchy);
            ledgers.push(run.ledger);
        }

        let mut by_source: BTreeMap<usize, Vec<MetricEdge>> = BTreeMap::new();
        for (_, _, e) in buckets.bucketed() {
            by_source.entry(e.i).or_default().push(*e);
        }
        for (src, list) in by_source {
            let sp = spanner.search(graph, metric.terminals[src]);
            for e in list {
                if !tol::within(sp.dist[metric.terminals[e.j]], (1.0 + s * eps) * e.w) {
                    diag.final_repairs += 1;
                    spanner.extend(graph, metric.kappa_edges(e.i, e.j).iter().copied());
                }
            }
        }
    }

    let mut edge_ids = spanner.ids().to_vec();
    edge_ids.sort_unstable();
    let out = graph.edge_subgraph(edge_ids.iter().copied());
    diag.spanner_weight = out.total_weight();
    diag.lightness = if mst_weight > 0.0 { diag.spanner_weight / mst_weight } else { 0.0 };
    let report = verify_stretch_with(&out, graph, terminals, diag.stretch_bound, exec)?;
    diag.max_stretch = report.max_stretch;
    diag.stretch_violations = report.violations;
    Ok(SubsetSpanner { graph: out, edge_ids, diagnostics: diag, hierarchies, ledgers, buckets, metric, mst })
}

fn mst_members(ctx: &Ctx, cluster_of: &[usize], id: usize) -> Vec<usize> {
    ctx.mst
        .iter()
        .filter(|e| cluster_of[e.i] == id && cluster_of[e.j] == id)
        .flat_map(|e| ctx.metric.kappa_edges(e.i, e.j).iter().copied())
        .collect()
}

fn vertices(ctx: &Ctx, terms: &[usize]) -> Vec<usize> {
    terms.iter().map(|&t| ctx.metric.terminals[t]).collect()
}

fn run_class(ctx: &Ctx, j: usize) -> Result<Option<ClassRun>, SubsetError> {
    let Some(top) = ctx.buckets.highest_level(j) else { return Ok(None) };
    let graph = ctx.graph;
    let k = ctx.metric.k();
    let eps = ctx.eps;
    let mut spanner = ctx.base.clone();
    let mut ledger = CreditLedger::new();
    let w0 = rational(ctx.buckets.w0);
    let mut diags = Vec::new();
    let mut oracle_calls = 0;
    let mut ws_observed: f64 = 0.0;
    let mut added = Vec::new();

    let ell0 = ctx.buckets.ell(j, 0);
    let sets = level0_clusters(k, ctx.mst, ell0);
    let mut cluster_of = vec![0; k];
    for (id, set) in sets.iter().enumerate() {
        for &t in set {
            cluster_of[t] = id;
        }
    }
    let accounts: Vec<usize> = sets.iter().map(|_| ledger.open()).collect();
    for e in ctx.mst {
        let half = edge_credit(&ctx.c, &w0, e.w) / BigRational::from_integer(2.into());
        let note = format!("tree edge {}-{}", e.i, e.j);
        ledger.mint(accounts[cluster_of[e.i]], half.clone(), note.clone());
        ledger.mint(accounts[cluster_of[e.j]], half, note);
    }
    let mut d0 = LevelDiagnostics { class: j, level: 0, ell: ell0, clusters: sets.len(), ..Default::default() };
    let mut clusters: Vec<Cluster> = Vec::with_capacity(sets.len());
    for (id, set) in sets.into_iter().enumerate() {
        let mut members = mst_members(ctx, &cluster_of, id);
        members.sort_unstable();
        members.dedup();
        let diameter = member_diameter(graph, &vertices(ctx, &set), &members);
        let credit = ledger.balance(accounts[id]).clone();
        check_invariants(ctx, &mut d0, diameter, &credit, ell0);
        clusters.push(Cluster {
            terminals: set,
            members,
            diameter,
            children: Vec::new(),
            phase: 0,
            credit,
            account: accounts[id],
        });
    }
    d0.ledger_residual = to_f64(&ledger.residual());
    diags.push(d0);
    let mut levels = vec![Level { index: 0, ell: ell0, clusters }];

    for i in 1..=top {
        let ell = ctx.buckets.ell(j, i);
        let prev = &levels.last().unwrap().clusters;
        let bucket = ctx.buckets.bucket(j, i);
        let kg = build_cluster_graph(graph, ctx.metric, &cluster_of, prev.len(), bucket, &spanner, eps, ctx.g)?;
        let params = LevelParams { ell, eps, g: ctx.g };
        let threshold = params.high_degree();
        let is_high: Vec<bool> = (0..prev.len()).map(|x| kg.degree(x) as f64 >= threshold).collect();
        let mut owed = vec![0.0f64; prev.len()];
        let before = spanner.len();
        let mut d = LevelDiagnostics {
            class: j,
            level: i,
            ell,
            bucket_edges: bucket.len(),
            k_edges: kg.edges.len(),
            k_removed: kg.removed,
            high_nodes: is_high.iter().filter(|&&h| h).count(),
            ..Default::default()
        };

        for ke in &kg.edges {
            if is_high[ke.a] && is_high[ke.b] {
                continue;
            }
            let payer = if is_high[ke.a] { ke.b } else { ke.a };
            owed[payer] += spanner.extend(graph, ctx.metric.kappa_edges(ke.e.i, ke.e.j).iter().copied());
        }
        let high: Vec<usize> = (0..prev.len()).filter(|&x| is_high[x]).collect();
        if high.len() >= 2 {
            let reps: Vec<usize> = high.iter().map(|&x| prev[x].terminals[0]).collect();
            let (ids, stats) = ctx.oracle.query(graph, ctx.metric, &reps, 2.0 * ell, eps)?;
            oracle_calls += 1;
            ws_observed = ws_observed.max(stats.weak_ratio);
            let cost = spanner.extend(graph, ids);
            for &x in &high {
                owed[x] += cost / high.len() as f64;
            }
        }

        let bound = 1.0 + ctx.s * eps;
        let mut k_paths: Vec<Vec<usize>> = vec![Vec::new(); kg.edges.len()];
        let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (idx, ke) in kg.edges.iter().enumerate() {
            by_source.entry(ke.e.i).or_default().push(idx);
        }
        for (src, list) in by_source {
            let sp = spanner.search(graph, ctx.metric.terminals[src]);
            for idx in list {
                let ke = kg.edges[idx];
                let t = ctx.metric.terminals[ke.e.j];
                if tol::within(sp.dist[t], bound * ke.e.w) {
                    k_paths[idx] = sp.edge_path_to(t).expect("reachable within bound");
                } else {
                    d.repairs += 1;
                    let kappa = ctx.metric.kappa_edges(ke.e.i, ke.e.j);
                    owed[ke.a] += spanner.extend(graph, kappa.iter().copied());
                    k_paths[idx] = kappa.to_vec();
                }
            }
        }
        d.edges_bought = spanner.len() - before;
        d.weight_bought = owed.iter().sum();

        let tree = ClusterTree::build(&cluster_of, prev.len(), ctx.mst, ell);
        let diam: Vec<f64> = prev.iter().map(|c| c.diameter).collect();
        let assign = cluster_level(&kg, &tree, &diam, &params);
        d.clusters = assign.groups.len();
        d.clusters_by_phase = assign.count_by_phase();

        let mut next_of = vec![0; k];
        for (t, slot) in next_of.iter_mut().enumerate() {
            *slot = assign.group_of[cluster_of[t]];
        }
        let mut next = Vec::with_capacity(assign.groups.len());
        for (id, group) in assign.groups.iter().enumerate() {
            let mut terms: Vec<usize> = group.nodes.iter().flat_map(|&x| prev[x].terminals.iter().copied()).collect();
            terms.sort_unstable();
            let mut members: Vec<usize> = group.nodes.iter().flat_map(|&x| prev[x].members.iter().copied()).collect();
            members.extend(mst_members(ctx, &next_of, id));
            for &ke in &group.k_edges {
                members.extend(k_paths[ke].iter().copied());
            }
            members.sort_unstable();
            members.dedup();
            let diameter = member_diameter(graph, &vertices(ctx, &terms), &members);
            let account = ledger.open();
            for &x in &group.nodes {
                ledger.sweep(prev[x].account, account);
            }
            let credit = ledger.balance(account).clone();
            let reserve = check_invariants(ctx, &mut d, diameter, &credit, ell);
            let bill: f64 = group.nodes.iter().map(|&x| owed[x]).sum();
            let rest = ledger.debit_surplus(account, rational(bill), &reserve, &format!("level {i} purchases"))?;
            d.deferred += to_f64(&rest);
            ledger.defer(i, rest);
            next.push(Cluster {
                terminals: terms,
                members,
                diameter,
                children: group.nodes.clone(),
                phase: group.phase,
                credit,
                account,
            });
        }
        d.ledger_residual = to_f64(&ledger.residual());
        diags.push(d);
        cluster_of = next_of;
        levels.push(Level { index: i, ell, clusters: next });
    }

    let top_accounts: Vec<usize> = levels.last().unwrap().clusters.iter().map(|c| c.account).collect();
    ledger.settle(&top_accounts)?;
    if !ledger.conserved() {
        return Err(SubsetError::Invariant(format!("ledger of class {j} does not balance")));
    }
    added.extend(spanner.ids().iter().copied().filter(|&id| !ctx.base.contains(id)));
    Ok(Some(ClassRun {
        added,
        hierarchy: ClusterHierarchy { class: j, levels },
        ledger,
        diags,
        oracle_calls,
        ws_observed,
    }))
}

/// Record diameter and credit invariant failures; returns the credit reserve.
fn check_invariants(ctx: &Ctx, d: &mut LevelDiagnostics, diameter: f64, credit: &BigRational, ell: f64) -> BigRational {
    d.max_diameter = d.max_diameter.max(diameter);
    if !tol::within(diameter, ctx.g * ell) {
        d.dc1_violations += 1;
    }
    let reserve = &ctx.c * rational(diameter.max(ell / 2.0));
    if credit < &reserve {
        d.dc2_violations += 1;
    }
    reserve
}
