//! Nice tree decompositions with explicit introduce-edge nodes.

use std::collections::BTreeSet;

use graph_core::WeightedGraph;
use serde::Serialize;

use crate::{TdError, TreeDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Leaf,
    IntroduceVertex(usize),
    /// Introduces the graph edge with this id.
    IntroduceEdge(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NiceNode {
    pub kind: NodeKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Nodes are stored children-first; `root` is the last node.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
    pub width: usize,
}

struct Builder<'g> {
    graph: &'g WeightedGraph,
    nodes: Vec<NiceNode>,
    introduced: Vec<bool>,
}

impl Builder<'_> {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn introduce(&mut self, mut top: usize, v: usize) -> usize {
        let mut bag = self.nodes[top].bag.clone();
        let p = bag.binary_search(&v).unwrap_err();
        bag.insert(p, v);
        top = self.push(NodeKind::IntroduceVertex(v), bag, vec![top]);
        top
    }

    /// Introduces the pending edges at `v`, then forgets it.
    fn forget(&mut self, mut top: usize, v: usize) -> usize {
        let bag = self.nodes[top].bag.clone();
        let mut pending: Vec<usize> = self
            .graph
            .neighbors(v)
            .iter()
            .filter(|&&(u, id)| !self.introduced[id] && bag.binary_search(&u).is_ok())
            .map(|&(_, id)| id)
            .collect();
        pending.sort_unstable();
        for id in pending {
            self.introduced[id] = true;
            top = self.push(NodeKind::IntroduceEdge(id), bag.clone(), vec![top]);
        }
        let mut smaller = bag;
        smaller.retain(|&x| x != v);
        self.push(NodeKind::Forget(v), smaller, vec![top])
    }

    /// Turns the subtree rooted at `top` into one whose bag is `target`.
    fn adapt(&mut self, mut top: usize, target: &[usize]) -> usize {
        let bag = self.nodes[top].bag.clone();
        for &v in bag.iter().filter(|v| target.binary_search(v).is_err()) {
            top = self.forget(top, v);
        }
        for &v in target.iter().filter(|v| bag.binary_search(v).is_err()) {
            top = self.introduce(top, v);
        }
        top
    }
}

/// Converts a valid decomposition into a nice one of the same width rooted
/// at bag 0, with empty leaf and root bags.
pub fn make_nice(td: &TreeDecomposition, graph: &WeightedGraph) -> Result<NiceTreeDecomposition, TdError> {
    td.validate(graph)?;
    let adj = td.tree_adjacency();
    let mut order = Vec::new();
    let mut parent = vec![usize::MAX; td.bags.len()];
    let mut stack = vec![0];
    let mut seen = vec![false; td.bags.len()];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut b = Builder { graph, nodes: Vec::new(), introduced: vec![false; graph.m()] };
    let mut top = vec![usize::MAX; td.bags.len()];
    for &t in order.iter().rev() {
        let bag = &td.bags[t];
        let kids: Vec<usize> = adj[t].iter().copied().filter(|&c| parent[c] == t).collect();
        let mut branches: Vec<usize> = kids.iter().map(|&c| b.adapt(top[c], bag)).collect();
        if branches.is_empty() {
            let leaf = b.push(NodeKind::Leaf, Vec::new(), Vec::new());
            branches.push(b.adapt(leaf, bag));
        }
        let mut acc = branches[0];
        for &other in &branches[1..] {
            acc = b.push(NodeKind::Join, bag.clone(), vec![acc, other]);
        }
        top[t] = acc;
    }
    let root = b.adapt(top[0], &[]);
    Ok(NiceTreeDecomposition { nodes: b.nodes, root, width: td.width() })
}

impl NiceTreeDecomposition {
    /// Edges introduced in the subtree of `node` with both ends in its bag.
    pub fn bag_edges(&self, graph: &WeightedGraph, node: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            if let NodeKind::IntroduceEdge(id) = self.nodes[x].kind {
                out.insert(id);
            }
            stack.extend(&self.nodes[x].children);
        }
        let bag = &self.nodes[node].bag;
        out.retain(|&id| {
            let e = graph.edge(id);
            bag.binary_search(&e.u).is_ok() && bag.binary_search(&e.v).is_ok()
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_single_bag_counts() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2]], Vec::new());
        let nice = make_nice(&td, &g).unwrap();
        let count = |f: fn(&NodeKind) -> bool| nice.nodes.iter().filter(|n| f(&n.kind)).count();
        assert_eq!(count(|k| matches!(k, NodeKind::IntroduceVertex(_))), 3);
        assert_eq!(count(|k| matches!(k, NodeKind::IntroduceEdge(_))), 3);
        assert_eq!(count(|k| matches!(k, NodeKind::Forget(_))), 3);
        assert_eq!(count(|k| matches!(k, NodeKind::Leaf)), 1);
        assert!(nice.nodes[nice.root].bag.is_empty());
        assert_eq!(nice.width, 2);
    }
}
