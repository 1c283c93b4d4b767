//! Plain tree decompositions: validation, elimination-order heuristics and
//! the PACE `.td` text format.

use std::collections::BTreeSet;

use graph_core::WeightedGraph;
use serde::{Deserialize, Serialize};

use crate::TdError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// Each bag is a sorted, duplicate-free vertex list.
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Heuristic {
    #[default]
    MinFill,
    MinDegree,
}

impl TreeDecomposition {
    pub fn new(mut bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        TreeDecomposition { bags, edges }
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks the tree shape, vertex coverage, edge coverage and
    /// connected-occurrence axioms against `graph`.
    pub fn validate(&self, graph: &WeightedGraph) -> Result<(), TdError> {
        let nb = self.bags.len();
        let axiom = |axiom: &'static str, detail: String| Err(TdError::Axiom { axiom, detail });
        if nb == 0 {
            return axiom("tree", "no bags".into());
        }
        if self.edges.len() != nb - 1 {
            return axiom("tree", format!("{} bags but {} tree edges", nb, self.edges.len()));
        }
        for &(a, b) in &self.edges {
            if a >= nb || b >= nb || a == b {
                return axiom("tree", format!("bad tree edge ({a}, {b})"));
            }
        }
        let adj = self.tree_adjacency();
        if reach(&adj, 0, |_| true).iter().filter(|&&r| r).count() != nb {
            return axiom("tree", "decomposition tree is disconnected".into());
        }
        let mut holders = vec![Vec::new(); graph.n()];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= graph.n() {
                    return axiom("vertex coverage", format!("bag {i} holds unknown vertex {v}"));
                }
                holders[v].push(i);
            }
        }
        if let Some(v) = holders.iter().position(Vec::is_empty) {
            return axiom("vertex coverage", format!("vertex {v} is in no bag"));
        }
        for e in graph.edges() {
            let common = holders[e.u].iter().any(|b| self.bags[*b].binary_search(&e.v).is_ok());
            if !common {
                return axiom("edge coverage", format!("edge ({}, {}) is in no bag", e.u, e.v));
            }
        }
        for (v, hs) in holders.iter().enumerate() {
            let inside: BTreeSet<usize> = hs.iter().copied().collect();
            let seen = reach(&adj, hs[0], |b| inside.contains(&b));
            if inside.iter().any(|&b| !seen[b]) {
                return axiom("connectivity", format!("bags holding vertex {v} are not connected"));
            }
        }
        Ok(())
    }

    /// Decomposition from a greedy elimination ordering.
    pub fn heuristic(graph: &WeightedGraph, rule: Heuristic) -> TreeDecomposition {
        let n = graph.n();
        if n == 0 {
            return TreeDecomposition { bags: vec![Vec::new()], edges: Vec::new() };
        }
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for e in graph.edges() {
            adj[e.u].insert(e.v);
            adj[e.v].insert(e.u);
        }
        let mut alive = vec![true; n];
        let mut order = Vec::with_capacity(n);
        let mut bag_of = vec![Vec::new(); n];
        for _ in 0..n {
            let score = |v: usize| match rule {
                Heuristic::MinDegree => adj[v].len(),
                Heuristic::MinFill => fill_in(&adj, v),
            };
            let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (score(v), adj[v].len(), v)).unwrap();
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
                adj[a].remove(&v);
            }
            let mut bag = nbrs;
            bag.push(v);
            bag.sort_unstable();
            bag_of[v] = bag;
            alive[v] = false;
            order.push(v);
        }
        let mut rank = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut edges = Vec::new();
        for &v in &order[..n - 1] {
            let parent = bag_of[v].iter().copied().filter(|&u| u != v).min_by_key(|&u| rank[u]);
            // Isolated pieces hang off the last bag so the result stays a tree.
            let p = parent.unwrap_or(order[n - 1]);
            edges.push((rank[v], rank[p]));
        }
        let bags = order.iter().map(|&v| std::mem::take(&mut bag_of[v])).collect();
        TreeDecomposition { bags, edges }
    }

    /// Parses the PACE `.td` format (1-based bags and vertices).
    pub fn from_pace(text: &str) -> Result<TreeDecomposition, TdError> {
        let mut header: Option<(usize, usize)> = None;
        let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
        let mut edges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |m: &str| TdError::Parse { line: line_no, message: m.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |t: &str| t.parse::<usize>().map_err(|_| err(&format!("not a number: {t}")));
            match toks.first() {
                None | Some(&"c") => continue,
                Some(&"s") => {
                    if toks.len() != 5 || toks[1] != "td" {
                        return Err(err("expected `s td <bags> <max bag size> <vertices>`"));
                    }
                    let nb = num(toks[2])?;
                    header = Some((nb, num(toks[4])?));
                    bags = vec![None; nb];
                }
                Some(&"b") => {
                    let (_, nv) = header.ok_or_else(|| err("bag before header"))?;
                    let id = num(toks.get(1).ok_or_else(|| err("missing bag id"))?)?;
                    if id == 0 || id > bags.len() {
                        return Err(err("bag id out of range"));
                    }
                    let mut bag = Vec::new();
                    for t in &toks[2..] {
                        let v = num(t)?;
                        if v == 0 || v > nv {
                            return Err(err("vertex out of range"));
                        }
                        bag.push(v - 1);
                    }
                    if bags[id - 1].replace(bag).is_some() {
                        return Err(err("bag listed twice"));
                    }
                }
                Some(_) => {
                    if toks.len() != 2 {
                        return Err(err("expected a tree edge `a b`"));
                    }
                    let (a, b) = (num(toks[0])?, num(toks[1])?);
                    if header.is_none() {
                        return Err(err("tree edge before header"));
                    }
                    if a == 0 || b == 0 || a > bags.len() || b > bags.len() {
                        return Err(err("tree edge endpoint out of range"));
                    }
                    edges.push((a - 1, b - 1));
                }
            }
        }
        if header.is_none() {
            return Err(TdError::Parse { line: 0, message: "missing `s td` header".into() });
        }
        let bags = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| TdError::Parse { line: 0, message: format!("bag {} missing", i + 1) }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TreeDecomposition::new(bags, edges))
    }

    pub fn to_pace(&self, n: usize) -> String {
        let max = self.bags.iter().map(Vec::len).max().unwrap_or(0);
        let mut s = format!("s td {} {} {}\n", self.bags.len(), max, n);
        for (i, bag) in self.bags.iter().enumerate() {
            s.push_str(&format!("b {}", i + 1));
            for v in bag {
                s.push_str(&format!(" {}", v + 1));
            }
            s.push('\n');
        }
        for &(a, b) in &self.edges {
            s.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        s
    }
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        missing += nbrs[i + 1..].iter().filter(|b| !adj[a].contains(b)).count();
    }
    missing
}

fn reach(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] && allowed(y) {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}
