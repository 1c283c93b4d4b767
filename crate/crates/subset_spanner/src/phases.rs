//! Grouping of one level's ε-clusters into the next level's clusters.

use std::collections::VecDeque;

use serde::Serialize;

use crate::clusters::{ClusterGraph, ClusterTree};

/// Scale and constants of one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelParams {
    pub ell: f64,
    pub eps: f64,
    pub g: f64,
}

impl LevelParams {
    /// Nodes with at least this many cluster-graph neighbours are high degree.
    pub fn high_degree(&self) -> f64 {
        2.0 * self.g / self.eps + 1.0
    }
}

/// A new cluster: its ε-cluster nodes, the phase that formed it, and the
/// cluster-graph edges that hold it together.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Group {
    pub nodes: Vec<usize>,
    pub phase: u8,
    pub k_edges: Vec<usize>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LevelAssignment {
    pub groups: Vec<Group>,
    pub group_of: Vec<usize>,
    pub high: Vec<usize>,
}

impl LevelAssignment {
    pub fn count_by_phase(&self) -> [usize; 4] {
        let mut out = [0; 4];
        for g in &self.groups {
            out[g.phase as usize - 1] += 1;
        }
        out
    }
}

struct State<'a> {
    tree: &'a ClusterTree,
    diam: &'a [f64],
    owner: Vec<Option<usize>>,
    groups: Vec<Group>,
}

impl<'a> State<'a> {
    fn free(&self, x: usize) -> bool {
        self.owner[x].is_none()
    }

    fn create(&mut self, nodes: Vec<usize>, phase: u8, k_edges: Vec<usize>) -> usize {
        let id = self.groups.len();
        for &x in &nodes {
            debug_assert!(self.owner[x].is_none());
            self.owner[x] = Some(id);
        }
        self.groups.push(Group { nodes, phase, k_edges });
        id
    }

    fn attach(&mut self, id: usize, nodes: &[usize], k_edges: &[usize]) {
        for &x in nodes {
            debug_assert!(self.owner[x].is_none());
            self.owner[x] = Some(id);
        }
        self.groups[id].nodes.extend_from_slice(nodes);
        self.groups[id].k_edges.extend_from_slice(k_edges);
    }

    fn free_degree(&self, x: usize) -> usize {
        self.tree.neighbors(x).iter().filter(|&&(y, _)| self.free(y)).count()
    }

    /// Largest node-plus-edge weighted path inside `set` (a subtree).
    fn ediam(&self, set: &[usize]) -> f64 {
        let mut inside = vec![false; self.tree.nodes];
        for &x in set {
            inside[x] = true;
        }
        let mut best: f64 = 0.0;
        for &s in set {
            let mut stack = vec![(s, usize::MAX, self.diam[s])];
            while let Some((x, from, len)) = stack.pop() {
                best = best.max(len);
                for &(y, idx) in self.tree.neighbors(x) {
                    if y != from && inside[y] {
                        stack.push((y, x, len + self.tree.weight(idx) + self.diam[y]));
                    }
                }
            }
        }
        best
    }

    /// Free nodes reachable from `start` through free nodes.
    fn free_component(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.tree.nodes];
        let mut out = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            i += 1;
            for &(y, _) in self.tree.neighbors(x) {
                if !seen[y] && self.free(y) {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out
    }

    /// Walk from `x` through `first` along free degree-2 nodes; the shortest
    /// prefix whose effective diameter exceeds `ell`, if one exists.
    fn reach(&self, x: usize, first: usize, first_edge: usize, ell: f64) -> Option<Vec<usize>> {
        let mut seq = vec![x];
        let mut len = self.diam[x];
        let (mut prev, mut cur, mut edge) = (x, first, first_edge);
        loop {
            len += self.tree.weight(edge) + self.diam[cur];
            seq.push(cur);
            if len > ell {
                return Some(seq);
            }
            if self.free_degree(cur) != 2 {
                return None;
            }
            let &(next, next_edge) = self
                .tree
                .neighbors(cur)
                .iter()
                .find(|&&(y, _)| y != prev && self.free(y))
                .expect("free degree two");
            prev = cur;
            cur = next;
            edge = next_edge;
        }
    }

    /// Both directions of a deep node, or `None`.
    fn deep_paths(&self, x: usize, ell: f64) -> Option<(Vec<usize>, Vec<usize>)> {
        if !self.free(x) || self.free_degree(x) != 2 {
            return None;
        }
        let dirs: Vec<(usize, usize)> =
            self.tree.neighbors(x).iter().copied().filter(|&(y, _)| self.free(y)).collect();
        let p = self.reach(x, dirs[0].0, dirs[0].1, ell)?;
        let q = self.reach(x, dirs[1].0, dirs[1].1, ell)?;
        Some((p, q))
    }
}

/// Assign every node of the cluster graph to exactly one new cluster.
///
/// Phase 1 handles high-degree nodes of `k` and their neighbours, phase 2
/// grows subtrees around branching nodes of the cluster tree, phase 3 joins
/// two long tree paths through a cluster-graph edge, and phase 4 breaks up or
/// attaches whatever is left.
pub fn cluster_level(k: &ClusterGraph, tree: &ClusterTree, diam: &[f64], p: &LevelParams) -> LevelAssignment {
    let n = k.nodes;
    assert_eq!(tree.nodes, n, "cluster graph and tree disagree on node count");
    let ell = p.ell;
    let is_high: Vec<bool> = (0..n).map(|x| k.degree(x) as f64 >= p.high_degree()).collect();
    let high: Vec<usize> = (0..n).filter(|&x| is_high[x]).collect();
    let mut st = State { tree, diam, owner: vec![None; n], groups: Vec::new() };

    for &x in &high {
        if st.free(x) && k.neighbors(x).iter().all(|&(y, _)| st.free(y)) {
            let mut nodes = vec![x];
            nodes.extend(k.neighbors(x).iter().map(|&(y, _)| y));
            let edges = k.neighbors(x).iter().map(|&(_, e)| e).collect();
            st.create(nodes, 1, edges);
        }
    }
    for &x in &high {
        if !st.free(x) {
            continue;
        }
        let &(y, e) = k.neighbors(x).iter().find(|&&(y, _)| !st.free(y)).expect("a neighbour was marked");
        let id = st.owner[y].unwrap();
        let mut nodes = vec![x];
        let mut edges = vec![e];
        for &(z, ez) in k.neighbors(x) {
            if st.free(z) && z != x {
                nodes.push(z);
                edges.push(ez);
            }
        }
        st.attach(id, &nodes, &edges);
    }
    for z in 0..n {
        if !st.free(z) || is_high[z] {
            continue;
        }
        if let Some(&(h, e)) = k.neighbors(z).iter().find(|&&(y, _)| is_high[y]) {
            let id = st.owner[h].unwrap();
            st.attach(id, &[z], &[e]);
        }
    }

    for x in 0..n {
        if !st.free(x) || st.free_degree(x) < 3 {
            continue;
        }
        let mut grown = vec![x];
        let mut seen = vec![false; n];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        let mut accepted = false;
        'grow: while let Some(v) = queue.pop_front() {
            for &(y, _) in tree.neighbors(v) {
                if seen[y] || !st.free(y) {
                    continue;
                }
                seen[y] = true;
                grown.push(y);
                queue.push_back(y);
                let d = st.ediam(&grown);
                if d >= ell {
                    accepted = d <= 2.0 * ell;
                    break 'grow;
                }
            }
        }
        if accepted {
            grown.sort_unstable();
            st.create(grown, 2, Vec::new());
        }
    }

    let mut order: Vec<usize> = (0..k.edges.len()).collect();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (&k.edges[a].e, &k.edges[b].e);
        ea.w.total_cmp(&eb.w).then((ea.i, ea.j).cmp(&(eb.i, eb.j)))
    });
    for idx in order {
        let ke = k.edges[idx];
        let Some((px, qx)) = st.deep_paths(ke.a, ell) else { continue };
        let Some((py, qy)) = st.deep_paths(ke.b, ell) else { continue };
        let mut xs: Vec<usize> = px.iter().chain(&qx).copied().collect();
        let mut ys: Vec<usize> = py.iter().chain(&qy).copied().collect();
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        if xs.iter().any(|x| ys.binary_search(x).is_ok()) {
            continue;
        }
        xs.extend(ys);
        xs.sort_unstable();
        st.create(xs, 3, vec![idx]);
    }

    for start in 0..n {
        if !st.free(start) {
            continue;
        }
        let comp = st.free_component(start);
        if st.ediam(&comp) <= ell {
            let link = comp
                .iter()
                .flat_map(|&x| tree.neighbors(x).iter().map(move |&(y, e)| (y, e)))
                .filter(|&(y, _)| !st.free(y))
                .min_by(|a, b| tree.weight(a.1).total_cmp(&tree.weight(b.1)).then(a.1.cmp(&b.1)));
            let mut nodes = comp;
            nodes.sort_unstable();
            match link {
                Some((y, _)) => {
                    let id = st.owner[y].unwrap();
                    st.attach(id, &nodes, &[]);
                }
                None => {
                    st.create(nodes, 4, Vec::new());
                }
            }
            continue;
        }
        break_component(&mut st, &comp, ell);
    }

    let mut groups = st.groups;
    for g in &mut groups {
        g.nodes.sort_unstable();
        g.k_edges.sort_unstable();
        g.k_edges.dedup();
    }
    let mut group_of = vec![usize::MAX; n];
    for (id, g) in groups.iter().enumerate() {
        for &x in &g.nodes {
            group_of[x] = id;
        }
    }
    LevelAssignment { groups, group_of, high }
}

/// Cut a free subtree bottom-up into pieces of effective diameter at least
/// `ell`; the leftover at the root joins an adjacent piece.
fn break_component(st: &mut State, comp: &[usize], ell: f64) {
    let n = st.tree.nodes;
    let root = *comp.iter().min().unwrap();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(comp.len());
    let mut stack = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(y, _) in st.tree.neighbors(v).iter().rev() {
            if !seen[y] && st.free(y) {
                seen[y] = true;
                parent[y] = v;
                stack.push(y);
            }
        }
    }
    let mut pending: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut piece_at = vec![None; n];
    for &v in order.iter().rev() {
        let mut pend = vec![v];
        for &(c, _) in st.tree.neighbors(v) {
            if parent[c] == v && piece_at[c].is_none() {
                pend.extend(pending[c].take().unwrap_or_default());
            }
        }
        if st.ediam(&pend) >= ell {
            pend.sort_unstable();
            piece_at[v] = Some(st.create(pend, 4, Vec::new()));
        } else {
            pending[v] = Some(pend);
        }
    }
    if let Some(mut rest) = pending[root].take() {
        rest.sort_unstable();
        let target = rest.iter().find_map(|&u| {
            st.tree.neighbors(u).iter().find_map(|&(c, _)| if parent[c] == u { piece_at[c] } else { None })
        });
        match target {
            Some(id) => st.attach(id, &rest, &[]),
            None => {
                st.create(rest, 4, Vec::new());
            }
        }
    }
}
