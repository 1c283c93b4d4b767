use std::collections::{BTreeMap, BTreeSet};

use graph_core::families::{grid, random_grid, random_tree};
use graph_core::WeightedGraph;
use ptas_pipeline::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subset_spanner::doubling_oracle;
use treewidth_dp::held_karp;

fn pick(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        all.swap(i, j);
    }
    let mut t = all[..k].to_vec();
    t.sort_unstable();
    t
}

/// Independent closed-walk check: even degrees, one component, terminals on it.
fn valid_walk(g: &WeightedGraph, m: &Multiset, t: &[usize]) -> bool {
    let mut deg = vec![0u32; g.n()];
    let mut adj = vec![Vec::new(); g.n()];
    for (&id, &c) in m {
        let e = g.edge(id);
        deg[e.u] += c;
        deg[e.v] += c;
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    if deg.iter().any(|d| d % 2 == 1) || t.iter().any(|&x| deg[x] == 0) {
        return false;
    }
    let start = t[0];
    let mut seen = vec![false; g.n()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    (0..g.n()).all(|v| deg[v] == 0 || seen[v])
}

/// Weight of the minimal subtree of a tree spanning `t`.
fn subtree_weight(g: &WeightedGraph, t: &[usize]) -> f64 {
    let mut alive: Vec<bool> = vec![true; g.m()];
    let keep: BTreeSet<usize> = t.iter().copied().collect();
    loop {
        let mut deg = vec![0; g.n()];
        for (id, e) in g.edges().iter().enumerate() {
            if alive[id] {
                deg[e.u] += 1;
                deg[e.v] += 1;
            }
        }
        let leaf_edge = g.edges().iter().enumerate().position(|(id, e)| {
            alive[id] && ((deg[e.u] == 1 && !keep.contains(&e.u)) || (deg[e.v] == 1 && !keep.contains(&e.v)))
        });
        match leaf_edge {
            Some(id) => alive[id] = false,
            None => break,
        }
    }
    g.edges().iter().enumerate().filter(|(id, _)| alive[*id]).map(|(_, e)| e.w).sum()
}

#[test]
fn trees_give_twice_the_subtree() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for round in 0..8 {
        let g = random_tree(30, 1.0, 5.0, &mut rng);
        let t = pick(30, 2 + round % 5, &mut rng);
        for eps in [0.2, 5.0] {
            let r = run_ptas(&g, &t, eps, &doubling_oracle(), &BfsLayerPartitioner, &PtasOptions::default()).unwrap();
            let expect = 2.0 * subtree_weight(&g, &t);
            assert!((r.weight - expect).abs() < 1e-9, "got {} expected {expect}", r.weight);
            assert!(valid_walk(&g, &r.edges, &t));
        }
    }
}

#[test]
fn single_part_runs_on_the_spanner() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = random_grid(5, 5, 1.0, 3.0, &mut rng);
    let t = pick(25, 5, &mut rng);
    let r = run_ptas(&g, &t, 1e6, &doubling_oracle(), &GreedyPartitioner, &PtasOptions::default()).unwrap();
    assert_eq!(r.report.g, 1);
    assert!(r.report.uncontracted);
    assert_eq!(r.report.w_x, 0.0);
    assert!(valid_walk(&g, &r.edges, &t));
    assert!(r.weight >= held_karp(&g, &t).unwrap() - 1e-9);
}

#[test]
fn grid_tours_are_feasible_and_above_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for round in 0..10 {
        let side = rng.gen_range(4..=10);
        let g = random_grid(side, side, 1.0, 4.0, &mut rng);
        let t = pick(side * side, rng.gen_range(2..=8), &mut rng);
        let part: &dyn Partitioner = if round % 2 == 0 { &BfsLayerPartitioner } else { &GreedyPartitioner };
        let r = run_ptas(&g, &t, 0.3, &doubling_oracle(), part, &PtasOptions::default()).unwrap();
        let opt = held_karp(&g, &t).unwrap();
        assert!(valid_walk(&g, &r.edges, &t));
        let w: f64 = r.edges.iter().map(|(&id, &m)| g.edge(id).w * m as f64).sum();
        assert!((w - r.weight).abs() < 1e-9);
        assert!(r.weight >= opt * (1.0 - 1e-12));
        assert!(r.report.lower_bound_exact);
        assert!((r.report.lower_bound - opt).abs() < 1e-9);
        assert!(r.report.w_x <= r.report.spanner_weight / r.report.parts as f64 * (1.0 + 1e-12));
        println!("side {side} k {} {} ratio {:.4}", t.len(), part.name(), r.report.ratio);
    }
}

#[test]
fn partitioner_edge_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = random_grid(4, 4, 1.0, 9.0, &mut rng);
    for p in [&BfsLayerPartitioner as &dyn Partitioner, &GreedyPartitioner] {
        let one = partition_spanner(&g, 1, p);
        assert_eq!(one.parts, vec![(0..g.m()).collect::<Vec<_>>()]);
    }
    let many = partition_spanner(&g, 1000, &GreedyPartitioner);
    assert_eq!(many.parts.len(), g.m());
    assert!(many.parts.iter().all(|p| p.len() == 1));
    let lightest = (0..g.m()).min_by(|&a, &b| g.edge(a).w.total_cmp(&g.edge(b).w)).unwrap();
    assert_eq!(many.chosen_edges(), &[lightest]);
}

#[test]
fn bfs_layers_recomputed() {
    let g = grid(6, 6);
    for gp in 1..6 {
        let part = partition_spanner(&g, gp, &BfsLayerPartitioner);
        assert_eq!(part.parts.len(), gp);
        let mut seen = BTreeMap::new();
        for (i, p) in part.parts.iter().enumerate() {
            for &id in p {
                assert!(seen.insert(id, i).is_none());
            }
        }
        assert_eq!(seen.len(), g.m());
        for (&id, &i) in &seen {
            // Vertex (r, c) of the grid sits at hop depth r + c from vertex 0.
            let e = g.edge(id);
            let depth = |v: usize| v / 6 + v % 6;
            assert_eq!(depth(e.u).min(depth(e.v)) % gp, i);
        }
        let wx = part.weight_x;
        assert!(wx <= part.weight_s / gp as f64 + 1e-9);
        println!("g {gp} measured width {}", part.measured_width);
    }
}

#[test]
fn contraction_merges_terminals() {
    let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]).unwrap();
    let c = contract(&g, &[0, 1], &[0, 2, 3]);
    assert_eq!(c.graph.n(), 2);
    assert_eq!(c.graph.m(), 2);
    assert_eq!(c.absorbed_terminals, 1);
    assert_eq!(c.terminals, vec![0, 1]);
    assert_eq!(c.super_of, vec![0, 0, 0, 1]);
}

#[test]
fn exact_matching_matches_enumeration() {
    fn brute(left: &[usize], d: &dyn Fn(usize, usize) -> f64) -> f64 {
        if left.is_empty() {
            return 0.0;
        }
        let (a, rest) = (left[0], &left[1..]);
        (0..rest.len())
            .map(|i| {
                let mut r = rest.to_vec();
                let b = r.remove(i);
                d(a, b) + brute(&r, d)
            })
            .fold(f64::INFINITY, f64::min)
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [2, 4, 6, 8] {
        let w: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(1..50) as f64).collect()).collect();
        let d = |a: usize, b: usize| w[a.min(b)][a.max(b)];
        let pairs = exact_matching(n, &d);
        let got: f64 = pairs.iter().map(|&(a, b)| d(a, b)).sum();
        let all: Vec<usize> = (0..n).collect();
        assert_eq!(got, brute(&all, &d));
        let greedy: f64 = greedy_matching(n, &d).iter().map(|&(a, b)| d(a, b)).sum();
        assert!(greedy >= got);
    }
}

#[test]
fn walk_checker_rejects_bad_multisets() {
    let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
    let odd: Multiset = [(0, 1)].into_iter().collect();
    assert!(check_closed_walk(&g, &odd, &[0, 1]).is_err());
    let split: Multiset = [(0, 2), (2, 2)].into_iter().collect();
    assert!(check_closed_walk(&g, &split, &[0, 3]).is_err());
    let good: Multiset = [(0, 2), (1, 2)].into_iter().collect();
    assert!(check_closed_walk(&g, &good, &[0, 2]).is_ok());
    assert!(check_closed_walk(&g, &good, &[0, 3]).is_err());
}

#[test]
fn width_cap_is_reported() {
    let g = grid(4, 4);
    let mut opts = PtasOptions::default();
    opts.dp.max_width = 0;
    let err = run_ptas(&g, &[0, 15], 1e6, &doubling_oracle(), &GreedyPartitioner, &opts).unwrap_err();
    assert!(matches!(err, PtasError::TooWide { .. }));
    assert!(run_ptas(&g, &[0, 15], 0.0, &doubling_oracle(), &GreedyPartitioner, &PtasOptions::default()).is_err());
}

#[test]
fn report_json_fields() {
    let g = grid(3, 3);
    let r = run_ptas(&g, &[0, 8, 2], 0.5, &doubling_oracle(), &BfsLayerPartitioner, &PtasOptions::default()).unwrap();
    let v = r.to_json(&g);
    for key in ["spanner_lightness", "g", "w_x", "measured_width", "tour_weight", "lower_bound", "ratio", "edges"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}
