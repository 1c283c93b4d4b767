//! Exact subset TSP over a nice tree decomposition.
//!
//! An encoding describes a partial solution restricted to the current bag:
//! a degree label per bag vertex (0 unused, 1 odd, 2 even and positive), the
//! partition of used bag vertices into connected components, the weight, and
//! the witness edge multiset. An edge is taken with multiplicity 0, 1 or 2.
//! Once the single component of a solution has been completed and all of its
//! vertices forgotten, the encoding is marked closed and no further edges may
//! be taken.

use std::collections::BTreeMap;

use graph_core::par::{self, Exec};
use graph_core::WeightedGraph;
use serde::Serialize;

use crate::partition::{join_extended, reduce_with, Partition, Reduction, WeightedPartition};
use crate::{make_nice, NiceTreeDecomposition, NodeKind, TdError, TreeDecomposition};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Encoding {
    /// One label per bag vertex, aligned with the table's sorted bag.
    pub labels: Vec<u8>,
    /// Partition of the bag vertices whose label is non-zero.
    #[serde(serialize_with = "blocks")]
    pub partition: Partition,
    pub weight: f64,
    /// Sorted `(edge id, multiplicity)` pairs.
    pub witness: Vec<(usize, u8)>,
    pub closed: bool,
}

fn blocks<S: serde::Serializer>(p: &Partition, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&p.blocks(), s)
}

impl Encoding {
    pub fn empty(bag_len: usize) -> Self {
        Encoding { labels: vec![0; bag_len], partition: Partition::empty(), weight: 0.0, witness: Vec::new(), closed: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionTable {
    pub bag: Vec<usize>,
    pub encodings: Vec<Encoding>,
}

impl PartitionTable {
    pub fn from_encodings(bag: Vec<usize>, encodings: Vec<Encoding>) -> Self {
        PartitionTable { bag, encodings }
    }

    pub fn len(&self) -> usize {
        self.encodings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.encodings.is_empty()
    }

    /// Number of distinct `(labels, closed)` groups.
    pub fn group_count(&self) -> usize {
        let mut keys: Vec<(&[u8], bool)> = self.encodings.iter().map(|e| (&e.labels[..], e.closed)).collect();
        keys.sort();
        keys.dedup();
        keys.len()
    }
}

#[derive(Clone, Debug)]
pub struct DpOptions {
    pub reduction: Reduction,
    pub max_width: usize,
    pub exec: Exec,
    /// Keep a copy of every node's table in the result.
    pub record_tables: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { reduction: Reduction::RankBased, max_width: 12, exec: Exec::default(), record_tables: false }
    }
}

/// Read-only state shared by all node computations.
pub struct DpContext<'a> {
    pub graph: &'a WeightedGraph,
    pub nice: &'a NiceTreeDecomposition,
    is_terminal: Vec<bool>,
    k: usize,
    /// Terminals forgotten at or below each node.
    forgotten_terminals: Vec<usize>,
    pub reduction: Reduction,
}

impl<'a> DpContext<'a> {
    pub fn new(graph: &'a WeightedGraph, terminals: &[usize], nice: &'a NiceTreeDecomposition, reduction: Reduction) -> Self {
        let mut is_terminal = vec![false; graph.n()];
        for &t in terminals {
            is_terminal[t] = true;
        }
        let k = is_terminal.iter().filter(|&&t| t).count();
        let mut forgotten_terminals = vec![0; nice.nodes.len()];
        for (i, node) in nice.nodes.iter().enumerate() {
            let below: usize = node.children.iter().map(|&c| forgotten_terminals[c]).sum();
            let here = matches!(node.kind, NodeKind::Forget(v) if is_terminal[v]);
            forgotten_terminals[i] = below + usize::from(here);
        }
        DpContext { graph, nice, is_terminal, k, forgotten_terminals, reduction }
    }
}

fn pos(bag: &[usize], v: usize) -> usize {
    bag.binary_search(&v).expect("vertex in bag")
}

fn tie_less(a: &Encoding, b: &Encoding) -> bool {
    let scale = a.weight.abs().max(b.weight.abs()).max(1.0);
    if (a.weight - b.weight).abs() > 1e-12 * scale {
        a.weight < b.weight
    } else {
        a.witness < b.witness
    }
}

/// Computes the table of `node` from its children's tables, then deduplicates
/// and reduces it.
pub fn process_node(ctx: &DpContext, node: usize, children: &[&PartitionTable]) -> Result<PartitionTable, TdError> {
    let n = &ctx.nice.nodes[node];
    let bag = n.bag.clone();
    let mut out: Vec<Encoding> = Vec::new();
    match n.kind {
        NodeKind::Leaf => out.push(Encoding::empty(0)),
        NodeKind::IntroduceVertex(v) => {
            let p = pos(&bag, v);
            for e in &children[0].encodings {
                let mut e = e.clone();
                e.labels.insert(p, 0);
                out.push(e);
            }
        }
        NodeKind::IntroduceEdge(id) => {
            let edge = ctx.graph.edge(id);
            let (pu, pv) = (pos(&bag, edge.u), pos(&bag, edge.v));
            for e in &children[0].encodings {
                out.push(e.clone());
                if e.closed {
                    continue;
                }
                for m in [1u8, 2] {
                    let mut x = e.clone();
                    for p in [pu, pv] {
                        x.labels[p] = step_label(x.labels[p], m);
                    }
                    x.partition.merge(edge.u, edge.v);
                    x.weight += f64::from(m) * edge.w;
                    let at = x.witness.binary_search_by_key(&id, |w| w.0).unwrap_err();
                    x.witness.insert(at, (id, m));
                    out.push(x);
                }
            }
        }
        NodeKind::Forget(v) => {
            let p = pos(&children[0].bag, v);
            for e in &children[0].encodings {
                let mut x = e.clone();
                let label = x.labels.remove(p);
                match label {
                    1 => continue,
                    0 if ctx.is_terminal[v] => continue,
                    0 => {}
                    _ if x.partition.block_size(v) > 1 => x.partition.remove(v),
                    _ => {
                        // The component of v closes here: it must be the whole
                        // solution.
                        let rest_unused = x.labels.iter().all(|&l| l == 0);
                        if !rest_unused || ctx.forgotten_terminals[node] != ctx.k {
                            continue;
                        }
                        x.partition.remove(v);
                        x.closed = true;
                    }
                }
                out.push(x);
            }
        }
        NodeKind::Join => {
            let (a, b) = (children[0], children[1]);
            for x in &a.encodings {
                for y in &b.encodings {
                    if let Some(z) = join_encodings(x, y) {
                        out.push(z);
                    }
                }
            }
        }
    }
    let table = shrink(bag, out, ctx.reduction);
    let b = table.bag.len() as u32;
    // At most 3^b label groups with 2^(|Y|-1) partitions each, plus the closed state.
    if ctx.reduction == Reduction::RankBased && table.len() > 6usize.pow(b) + 1 {
        return Err(TdError::Internal(format!("table at node {node} holds {} encodings", table.len())));
    }
    Ok(table)
}

fn step_label(label: u8, m: u8) -> u8 {
    let degree_parity = match label {
        0 | 2 => 0,
        _ => 1,
    };
    if (degree_parity + m) % 2 == 1 {
        1
    } else {
        2
    }
}

fn join_label(x: u8, y: u8) -> u8 {
    match (x, y) {
        (0, l) | (l, 0) => l,
        _ if (x + y) % 2 == 1 => 1,
        _ => 2,
    }
}

fn join_encodings(x: &Encoding, y: &Encoding) -> Option<Encoding> {
    let x_used = x.closed || !x.witness.is_empty();
    let y_used = y.closed || !y.witness.is_empty();
    if (x.closed && y_used) || (y.closed && x_used) {
        return None;
    }
    let labels = x.labels.iter().zip(&y.labels).map(|(&a, &b)| join_label(a, b)).collect();
    let partition = join_extended(&x.partition, &y.partition);
    let mut witness = Vec::with_capacity(x.witness.len() + y.witness.len());
    witness.extend_from_slice(&x.witness);
    witness.extend_from_slice(&y.witness);
    witness.sort_unstable();
    Some(Encoding { labels, partition, weight: x.weight + y.weight, witness, closed: x.closed || y.closed })
}

/// Keeps the best encoding per exact state, then reduces each label group.
fn shrink(bag: Vec<usize>, cands: Vec<Encoding>, mode: Reduction) -> PartitionTable {
    let mut best: BTreeMap<(Vec<u8>, bool, Partition), Encoding> = BTreeMap::new();
    for e in cands {
        let key = (e.labels.clone(), e.closed, e.partition.clone());
        match best.get(&key) {
            Some(cur) if !tie_less(&e, cur) => {}
            _ => {
                best.insert(key, e);
            }
        }
    }
    let mut groups: BTreeMap<(Vec<u8>, bool), Vec<Encoding>> = BTreeMap::new();
    for ((labels, closed, _), e) in best {
        groups.entry((labels, closed)).or_default().push(e);
    }
    let mut encodings = Vec::new();
    for (_, mut group) in groups {
        group.sort_by(|a, b| a.witness.cmp(&b.witness));
        let items = group.into_iter().map(|e| WeightedPartition { partition: e.partition.clone(), weight: e.weight, payload: e });
        encodings.extend(reduce_with(items.collect(), mode).into_iter().map(|w| w.payload));
    }
    PartitionTable { bag, encodings }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DpStats {
    pub width: usize,
    pub nodes: usize,
    pub max_table: usize,
    pub total_encodings: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TourSolution {
    pub weight: f64,
    /// `(edge id, multiplicity)` pairs of the optimal closed walk.
    pub edges: Vec<(usize, u32)>,
    pub stats: DpStats,
    #[serde(skip)]
    pub tables: Vec<(usize, PartitionTable)>,
}

impl TourSolution {
    /// `{weight, edges: [[u, v, multiplicity]]}` with endpoints from `graph`.
    pub fn to_json(&self, graph: &WeightedGraph) -> serde_json::Value {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(id, m)| {
                let e = graph.edge(id);
                serde_json::json!([e.u, e.v, m])
            })
            .collect();
        serde_json::json!({ "weight": self.weight, "edges": edges })
    }
}

/// Solves subset TSP with a min-fill heuristic decomposition.
pub fn subset_tsp(graph: &WeightedGraph, terminals: &[usize], opts: &DpOptions) -> Result<TourSolution, TdError> {
    let td = TreeDecomposition::heuristic(graph, crate::Heuristic::MinFill);
    let nice = make_nice(&td, graph)?;
    subset_tsp_dp(graph, terminals, &nice, opts)
}

pub fn subset_tsp_dp(
    graph: &WeightedGraph,
    terminals: &[usize],
    nice: &NiceTreeDecomposition,
    opts: &DpOptions,
) -> Result<TourSolution, TdError> {
    for &t in terminals {
        graph.check_vertex(t)?;
    }
    check_covers(graph, nice)?;
    if nice.width > opts.max_width {
        return Err(TdError::TooWide { width: nice.width, cap: opts.max_width });
    }
    let mut distinct = terminals.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let stats0 = DpStats { width: nice.width, nodes: nice.nodes.len(), ..Default::default() };
    if distinct.len() <= 1 {
        return Ok(TourSolution { weight: 0.0, edges: Vec::new(), stats: stats0, tables: Vec::new() });
    }
    let comps = graph.components();
    let comp_of = |v: usize| comps.iter().position(|c| c.contains(&v));
    if distinct.iter().any(|&t| comp_of(t) != comp_of(distinct[0])) {
        return Err(TdError::Input("terminals are not connected".into()));
    }
    let ctx = DpContext::new(graph, &distinct, nice, opts.reduction);
    let run = solve(&ctx, nice.root, opts)?;
    let best = run
        .table
        .encodings
        .iter()
        .filter(|e| e.closed)
        .min_by(|a, b| if tie_less(a, b) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater })
        .ok_or_else(|| TdError::Internal("root table has no closed encoding".into()))?;
    let stats = DpStats { max_table: run.max_table, total_encodings: run.total, ..stats0 };
    Ok(TourSolution {
        weight: best.weight,
        edges: best.witness.iter().map(|&(id, m)| (id, u32::from(m))).collect(),
        stats,
        tables: run.tables,
    })
}

struct Run {
    table: PartitionTable,
    max_table: usize,
    total: usize,
    tables: Vec<(usize, PartitionTable)>,
}

fn solve(ctx: &DpContext, node: usize, opts: &DpOptions) -> Result<Run, TdError> {
    let nodes = &ctx.nice.nodes;
    let mut chain = Vec::new();
    let mut cur = node;
    while nodes[cur].children.len() == 1 {
        chain.push(cur);
        cur = nodes[cur].children[0];
    }
    let mut run = if nodes[cur].kind == NodeKind::Join {
        let (l, r) = (nodes[cur].children[0], nodes[cur].children[1]);
        let (a, b) = par::join(opts.exec, || solve(ctx, l, opts), || solve(ctx, r, opts));
        let (a, b) = (a?, b?);
        let table = process_node(ctx, cur, &[&a.table, &b.table])?;
        let mut tables = a.tables;
        tables.extend(b.tables);
        Run { max_table: a.max_table.max(b.max_table), total: a.total + b.total, table, tables }
    } else {
        Run { table: process_node(ctx, cur, &[])?, max_table: 0, total: 0, tables: Vec::new() }
    };
    let record = |run: &mut Run, id: usize| {
        run.max_table = run.max_table.max(run.table.len());
        run.total += run.table.len();
        if opts.record_tables {
            run.tables.push((id, run.table.clone()));
        }
    };
    record(&mut run, cur);
    for &id in chain.iter().rev() {
        run.table = process_node(ctx, id, &[&run.table])?;
        record(&mut run, id);
    }
    Ok(run)
}

fn check_covers(graph: &WeightedGraph, nice: &NiceTreeDecomposition) -> Result<(), TdError> {
    let mut seen_v = vec![false; graph.n()];
    let mut seen_e = vec![0usize; graph.m()];
    for n in &nice.nodes {
        match n.kind {
            NodeKind::IntroduceVertex(v) if v < graph.n() => seen_v[v] = true,
            NodeKind::IntroduceEdge(id) if id < graph.m() => seen_e[id] += 1,
            NodeKind::IntroduceVertex(_) | NodeKind::IntroduceEdge(_) => {
                return Err(TdError::Input("decomposition refers to elements outside the graph".into()))
            }
            _ => {}
        }
    }
    if let Some(v) = seen_v.iter().position(|s| !s) {
        return Err(TdError::Input(format!("decomposition never introduces vertex {v}")));
    }
    if let Some(id) = seen_e.iter().position(|&c| c != 1) {
        return Err(TdError::Input(format!("edge {id} is introduced {} times", seen_e[id])));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_follow_parity() {
        assert_eq!(step_label(0, 1), 1);
        assert_eq!(step_label(1, 1), 2);
        assert_eq!(step_label(2, 1), 1);
        assert_eq!(step_label(1, 2), 1);
        assert_eq!(join_label(1, 1), 2);
        assert_eq!(join_label(2, 1), 1);
        assert_eq!(join_label(0, 2), 2);
    }
}
