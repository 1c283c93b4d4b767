//! Recursive spanner preserving prescribed short demand paths.

use std::collections::BTreeMap;

use graph_core::par::{self, Exec};
use graph_core::paths::path_weight;
use graph_core::{shortest_paths, tol, WeightedGraph};

use crate::error::SeparatorError;
use crate::provider::SeparatorProvider;
use crate::ptp::ptp_spanner;
use crate::single_source::check_eps;

#[derive(Debug, Clone, Copy)]
pub struct EllCloseOptions {
    pub exec: Exec,
    /// Maximum separator recursion depth; `None` means `4·⌈log₂ n⌉`.
    pub depth_cap: Option<usize>,
    /// Validate demands on entry and re-check a sample of them in every
    /// recursive call.
    pub verify: bool,
}

impl Default for EllCloseOptions {
    fn default() -> Self {
        EllCloseOptions { exec: Exec::Parallel, depth_cap: None, verify: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EllCloseStats {
    /// Calls that applied a separator.
    pub separator_calls: usize,
    pub ptp_calls: usize,
    pub max_depth: usize,
    /// Largest residual component relative to the graph it was cut from.
    pub worst_balance: f64,
    pub separator_paths: usize,
}

impl EllCloseStats {
    fn merge(&mut self, o: &EllCloseStats) {
        self.separator_calls += o.separator_calls;
        self.ptp_calls += o.ptp_calls;
        self.max_depth = self.max_depth.max(o.max_depth);
        self.worst_balance = self.worst_balance.max(o.worst_balance);
        self.separator_paths += o.separator_paths;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllCloseOutput {
    pub graph: WeightedGraph,
    pub stats: EllCloseStats,
}

struct Ctx<'a> {
    provider: &'a dyn SeparatorProvider,
    ell: f64,
    eps: f64,
    cap: usize,
    opts: EllCloseOptions,
}

type Partial = (Vec<usize>, EllCloseStats);

/// Subgraph of `graph` in which every demand path's endpoints are within
/// `1 + ε` of the path's length.
///
/// Demand paths must be shortest paths of weight at most `ℓ` between
/// terminals with no other terminal in between. Each call removes the
/// provider's separator sets one by one, builds a path-to-path spanner for
/// the demands crossing each set in the graph left after earlier sets, and
/// recurses on the remaining components.
pub fn ell_close_spanner(
    graph: &WeightedGraph,
    terminals: &[usize],
    demand_paths: &[Vec<usize>],
    ell: f64,
    eps: f64,
    provider: &dyn SeparatorProvider,
    opts: EllCloseOptions,
) -> Result<EllCloseOutput, SeparatorError> {
    check_eps(eps)?;
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(SeparatorError::Input(format!("scale must be positive, got {ell}")));
    }
    let mut is_term = vec![false; graph.n()];
    for &t in terminals {
        graph.check_vertex(t)?;
        if is_term[t] {
            return Err(SeparatorError::Input(format!("duplicate terminal {t}")));
        }
        is_term[t] = true;
    }
    if opts.verify {
        validate_demands(graph, &is_term, demand_paths, ell)?;
    }
    let demands: Vec<Vec<usize>> = demand_paths.iter().filter(|p| p.len() > 1).cloned().collect();
    let cap = opts.depth_cap.unwrap_or_else(|| {
        let n = graph.n().max(2) as f64;
        4 * (n.log2().ceil() as usize).max(1)
    });
    let ctx = Ctx { provider, ell, eps, cap, opts };
    let (ids, stats) = solve(&ctx, graph, terminals, demands, 0)?;
    Ok(EllCloseOutput { graph: graph.edge_subgraph(ids), stats })
}

fn validate_demands(g: &WeightedGraph, is_term: &[bool], demands: &[Vec<usize>], ell: f64) -> Result<(), SeparatorError> {
    let mut by_source: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
    for (i, p) in demands.iter().enumerate() {
        let (Some(&s), Some(&t)) = (p.first(), p.last()) else {
            return Err(SeparatorError::Input(format!("demand path {i} is empty")));
        };
        for &v in p {
            g.check_vertex(v)?;
        }
        if !is_term[s] || !is_term[t] {
            return Err(SeparatorError::Input(format!("demand path {i} does not join two terminals")));
        }
        if p.len() > 2 && p[1..p.len() - 1].iter().any(|&v| is_term[v]) {
            return Err(SeparatorError::Input(format!("demand path {i} passes through another terminal")));
        }
        let w = path_weight(g, p).ok_or_else(|| SeparatorError::Input(format!("demand path {i} uses a missing edge")))?;
        if !tol::within(w, ell) {
            return Err(SeparatorError::Input(format!("demand path {i} has weight {w} above scale {ell}")));
        }
        by_source.entry(s).or_default().push((t, w));
    }
    for (s, targets) in by_source {
        let sp = shortest_paths(g, s)?;
        for (t, w) in targets {
            if !tol::approx_eq(sp.dist[t], w) {
                return Err(SeparatorError::NotShortest(format!("demand path {s} -> {t} has weight {w}, distance is {}", sp.dist[t])));
            }
        }
    }
    Ok(())
}

/// Restrict to the vertices `keep` (relabelled in order) and carry terminals
/// and demands along.
fn restrict(
    g: &WeightedGraph,
    keep: &[usize],
    terminals: &[usize],
    demands: &[Vec<usize>],
) -> (WeightedGraph, Vec<usize>, Vec<usize>, Vec<Vec<usize>>) {
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in keep.iter().enumerate() {
        local[v] = i;
    }
    let (sub, origin) = g.induced(keep);
    let terms = terminals.iter().filter(|&&t| local[t] != usize::MAX).map(|&t| local[t]).collect();
    let dem = demands.iter().map(|p| p.iter().map(|&v| local[v]).collect()).collect();
    (sub, origin, terms, dem)
}

fn solve(ctx: &Ctx, g: &WeightedGraph, terminals: &[usize], demands: Vec<Vec<usize>>, depth: usize) -> Result<Partial, SeparatorError> {
    let mut stats = EllCloseStats { max_depth: depth, ..Default::default() };
    if terminals.len() <= 1 || demands.is_empty() {
        return Ok((Vec::new(), stats));
    }
    if depth > ctx.cap {
        return Err(SeparatorError::DepthExceeded { depth, cap: ctx.cap, worst_balance: stats.worst_balance });
    }
    let comps = g.components();
    if comps.len() > 1 {
        return split(ctx, g, &comps, terminals, demands, depth);
    }
    if ctx.opts.verify {
        for p in demands.iter().step_by(8) {
            let sp = shortest_paths(g, p[0])?;
            let w = path_weight(g, p).expect("demand edges survive restriction");
            if !tol::approx_eq(sp.dist[*p.last().unwrap()], w) {
                return Err(SeparatorError::NotShortest(format!("demand path stopped being shortest at depth {depth}")));
            }
        }
    }
    let family = ctx.provider.family(g);
    family.verify(g)?;
    stats.separator_calls = 1;
    stats.separator_paths = family.path_count();
    stats.worst_balance = family.balance(g);
    let mut removed = vec![false; g.n()];
    let mut remaining = demands;
    let mut ids = Vec::new();
    for set in &family.sets {
        let mut in_set = vec![false; g.n()];
        for v in set.iter().flatten() {
            in_set[*v] = true;
        }
        let (crossing, rest): (Vec<_>, Vec<_>) = remaining.into_iter().partition(|p| p.iter().any(|&v| in_set[v]));
        remaining = rest;
        if !crossing.is_empty() {
            let keep: Vec<usize> = (0..g.n()).filter(|&v| !removed[v]).collect();
            let (gi, origin, _, paths) = restrict(g, &keep, &[], &crossing);
            let (_, _, _, base) = restrict(g, &keep, &[], set);
            let h = ptp_spanner(&gi, &base, &paths, ctx.ell, ctx.eps)?;
            stats.ptp_calls += 1;
            ids.extend(gi.embed_subgraph(&h)?.into_iter().map(|e| origin[e]));
        }
        for v in set.iter().flatten() {
            removed[*v] = true;
        }
    }
    if remaining.is_empty() {
        return Ok((ids, stats));
    }
    let keep: Vec<usize> = (0..g.n()).filter(|&v| !removed[v]).collect();
    let (sub, origin, terms, dem) = restrict(g, &keep, terminals, &remaining);
    let (sub_ids, sub_stats) = match solve(ctx, &sub, &terms, dem, depth + 1) {
        Err(SeparatorError::DepthExceeded { depth, cap, worst_balance }) => {
            return Err(SeparatorError::DepthExceeded { depth, cap, worst_balance: worst_balance.max(stats.worst_balance) })
        }
        other => other?,
    };
    ids.extend(sub_ids.into_iter().map(|e| origin[e]));
    stats.merge(&sub_stats);
    Ok((ids, stats))
}

/// Recurse independently on each component holding a demand.
fn split(
    ctx: &Ctx,
    g: &WeightedGraph,
    comps: &[Vec<usize>],
    terminals: &[usize],
    demands: Vec<Vec<usize>>,
    depth: usize,
) -> Result<Partial, SeparatorError> {
    let mut comp_of = vec![0; g.n()];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for p in demands {
        groups.entry(comp_of[p[0]]).or_default().push(p);
    }
    let work: Vec<(usize, Vec<Vec<usize>>)> = groups.into_iter().collect();
    let results = par::map(ctx.opts.exec, &work, |(c, dem)| {
        let (sub, origin, terms, local) = restrict(g, &comps[*c], terminals, dem);
        solve(ctx, &sub, &terms, local, depth).map(|(ids, st)| (ids.into_iter().map(|e| origin[e]).collect::<Vec<_>>(), st))
    });
    let mut ids = Vec::new();
    let mut stats = EllCloseStats { max_depth: depth, ..Default::default() };
    for r in results {
        let (sub_ids, st) = r?;
        ids.extend(sub_ids);
        stats.merge(&st);
    }
    Ok((ids, stats))
}
