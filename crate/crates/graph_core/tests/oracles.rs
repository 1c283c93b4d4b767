//! Differential tests of graph_core against independent brute-force oracles.

use graph_core::families::{grid, pick_terminals, random_grid, random_tree};
use graph_core::graph::UnionFind;
use graph_core::mst::minimum_spanning_forest;
use graph_core::{
    metric_completion, metric_mst, minimum_spanning_tree, shortest_paths, steiner_2approx, verify_stretch,
    WeightedGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bellman_ford(g: &WeightedGraph, s: usize) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; g.n()];
    d[s] = 0.0;
    for _ in 0..g.n() {
        let mut changed = false;
        for e in g.edges() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if d[a] + e.w < d[b] {
                    d[b] = d[a] + e.w;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d
}

fn random_connected(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> WeightedGraph {
    let mut g = random_tree(n, 1.0, 10.0, rng);
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && g.edge_between(u, v).is_none() {
            g.add_edge(u, v, rng.gen_range(1.0..10.0)).unwrap();
        }
    }
    g
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn dijkstra_matches_bellman_ford() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let g = random_connected(50, 80, &mut rng);
        let s = rng.gen_range(0..50);
        let sp = shortest_paths(&g, s).unwrap();
        let bf = bellman_ford(&g, s);
        for v in 0..50 {
            assert!(close(sp.dist[v], bf[v]), "vertex {v}: {} vs {}", sp.dist[v], bf[v]);
            let path = sp.path_to(v).unwrap();
            assert_eq!(path[0], s);
            let w: f64 = sp.edge_path_to(v).unwrap().iter().map(|&e| g.edge(e).w).sum();
            assert_eq!(w, sp.dist[v]);
        }
    }
}

#[test]
fn completion_matches_pairwise_dijkstra_on_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = random_grid(5, 5, 1.0, 3.0, &mut rng);
    let t = pick_terminals(25, 6, &mut rng);
    let m = metric_completion(&g, &t).unwrap();
    for i in 0..6 {
        let bf = bellman_ford(&g, t[i]);
        for j in 0..6 {
            assert!(close(m.d(i, j), bf[t[j]]));
            assert_eq!(m.d(i, j), m.d(j, i));
            if i != j {
                let p = m.kappa(i, j);
                assert_eq!((p[0], *p.last().unwrap()), (t[i], t[j]));
                if i < j {
                    let w: f64 = m.kappa_edges(i, j).iter().map(|&e| g.edge(e).w).sum();
                    assert_eq!(w, m.d(i, j), "kappa weight must equal the entry exactly");
                }
            }
            for l in 0..6 {
                assert!(m.d(i, l) <= m.d(i, j) + m.d(j, l) + 1e-9);
            }
        }
    }
}

/// All labelled trees on `k` vertices via Prüfer sequences.
fn all_trees(k: usize) -> Vec<Vec<(usize, usize)>> {
    if k == 1 {
        return vec![vec![]];
    }
    if k == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut out = Vec::new();
    let mut seq = vec![0usize; k - 2];
    loop {
        let mut degree = vec![1usize; k];
        for &x in &seq {
            degree[x] += 1;
        }
        let mut edges = Vec::new();
        for &x in &seq {
            let leaf = (0..k).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf, x));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
        let mut i = 0;
        loop {
            if i == seq.len() {
                return out;
            }
            seq[i] += 1;
            if seq[i] < k {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn metric_mst_matches_pruefer_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trees = all_trees(8);
    assert_eq!(trees.len(), 8usize.pow(6));
    for _ in 0..3 {
        let g = random_connected(20, 30, &mut rng);
        let t = pick_terminals(20, 8, &mut rng);
        let m = metric_completion(&g, &t).unwrap();
        let mst: f64 = metric_mst(&m).unwrap().iter().map(|e| e.w).sum();
        let best = trees
            .iter()
            .map(|tr| tr.iter().map(|&(a, b)| m.d(a, b)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!(close(mst, best));
    }
}

#[test]
fn graph_mst_cut_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let g = random_connected(10, 15, &mut rng);
        let tree = minimum_spanning_tree(&g).unwrap();
        assert_eq!(tree.len(), 9);
        for &te in &tree {
            let mut uf = UnionFind::new(10);
            for &o in &tree {
                if o != te {
                    let e = g.edge(o);
                    uf.union(e.u, e.v);
                }
            }
            let cut = g.edge(te);
            for (id, e) in g.edges().iter().enumerate() {
                if tree.contains(&id) {
                    continue;
                }
                if uf.find(e.u) != uf.find(e.v) {
                    assert!(e.w >= cut.w, "non-tree edge lighter than tree edge across its cut");
                }
            }
        }
        assert_eq!(minimum_spanning_forest(&g), tree);
    }
}

/// Exact Steiner tree weight by Dreyfus–Wagner over all-pairs distances.
fn dreyfus_wagner(g: &WeightedGraph, terms: &[usize]) -> f64 {
    let n = g.n();
    let d: Vec<Vec<f64>> = (0..n).map(|s| bellman_ford(g, s)).collect();
    let k = terms.len();
    if k <= 1 {
        return 0.0;
    }
    let full = 1usize << k;
    let mut dp = vec![vec![f64::INFINITY; n]; full];
    for (i, &t) in terms.iter().enumerate() {
        for v in 0..n {
            dp[1 << i][v] = d[t][v];
        }
    }
    for mask in 1..full {
        if mask.count_ones() < 2 {
            continue;
        }
        for v in 0..n {
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                let val = dp[sub][v] + dp[mask ^ sub][v];
                if val < dp[mask][v] {
                    dp[mask][v] = val;
                }
                sub = (sub - 1) & mask;
            }
        }
        for v in 0..n {
            let mut best = dp[mask][v];
            for u in 0..n {
                best = best.min(dp[mask][u] + d[u][v]);
            }
            dp[mask][v] = best;
        }
    }
    dp[full - 1][terms[0]]
}

#[test]
fn steiner_within_twice_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let n = rng.gen_range(5..=12);
        let g = random_connected(n, n, &mut rng);
        let k = rng.gen_range(2..=5.min(n));
        let t = pick_terminals(n, k, &mut rng);
        let st = steiner_2approx(&g, &t).unwrap();
        let opt = dreyfus_wagner(&g, &t);
        assert!(st.is_forest());
        let comps: Vec<_> = st.components().into_iter().filter(|c| c.len() > 1 || t.contains(&c[0])).collect();
        assert!(comps.iter().any(|c| t.iter().all(|x| c.contains(x))));
        assert!(st.total_weight() >= opt - 1e-9);
        assert!(st.total_weight() <= 2.0 * opt * (1.0 + 1e-9));
    }
}

#[test]
fn subgraph_never_shortens() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let g = grid(4, 4);
    let ids: Vec<usize> = (0..g.m()).filter(|_| rng.gen_bool(0.8)).collect();
    let s = g.edge_subgraph(ids);
    let t: Vec<usize> = (0..16).collect();
    let r = verify_stretch(&s, &g, &t, 100.0).unwrap();
    assert!(r.per_pair.iter().all(|p| p.ratio >= 1.0));
    let max = r.per_pair.iter().map(|p| p.ratio).fold(1.0, f64::max);
    assert_eq!(r.max_stretch, max);
}
