use graph_core::families::{grid, pick_terminals, random_geometric, random_grid, random_tree};
use graph_core::par::Exec;
use graph_core::{shortest_paths, WeightedGraph};
use metric_oracles::{check_window, OracleQuery, SpannerOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use separator_spanner::{
    ell_close_spanner, ptp_single, ptp_spanner, ss_spanner, terminal_demands, walk_to_path_spanner, CentroidProvider,
    EllCloseOptions, SeparatorError, SeparatorFamily, SeparatorOracle, SeparatorProvider, SptCycleProvider,
};

const SLACK: f64 = 1.0 + 1e-9;

fn dist(g: &WeightedGraph, a: usize) -> Vec<f64> {
    shortest_paths(g, a).unwrap().dist
}

fn sp_path(g: &WeightedGraph, a: usize, b: usize) -> Vec<usize> {
    shortest_paths(g, a).unwrap().path_to(b).unwrap()
}

fn path_subgraph(g: &WeightedGraph, p: &[usize]) -> WeightedGraph {
    g.edge_subgraph(p.windows(2).map(|w| g.edge_between(w[0], w[1]).unwrap()))
}

fn random_walk(g: &WeightedGraph, len: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut w = vec![rng.gen_range(0..g.n())];
    for _ in 0..len {
        let nb = g.neighbors(*w.last().unwrap());
        w.push(nb[rng.gen_range(0..nb.len())].0);
    }
    w
}

#[test]
fn single_source_properties_on_random_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..20 {
        let g = random_grid(7, 7, 1.0, 4.0, &mut rng);
        let (a, b) = (rng.gen_range(0..49), rng.gen_range(0..49));
        let base = sp_path(&g, a, b);
        let p = rng.gen_range(0..49);
        let eps = [0.1, 0.25, 0.5][trial % 3];
        let s = ss_spanner(&g, &base, p, eps).unwrap();
        let h = s.to_subgraph(&g).union(&path_subgraph(&g, &base));
        let dg = dist(&g, p);
        let dh = dist(&h, p);
        for &q in &base {
            assert!(dh[q] <= (1.0 + eps) * dg[q] * SLACK, "trial {trial}: q={q}");
        }
        let r = base.iter().map(|&q| dg[q]).fold(f64::INFINITY, f64::min);
        assert_eq!(s.r, r);
        let bound_w = 8.0 / (eps * eps) * r * SLACK;
        assert!(s.right_weight() <= bound_w && s.left_weight() <= bound_w);
        assert!(s.right_count() as f64 <= 8.0 / (eps * eps));
        assert!(s.left_count() as f64 <= 8.0 / (eps * eps));
        assert!(s.right_reach() <= 4.0 / eps * r * SLACK && s.left_reach() <= 4.0 / eps * r * SLACK);
        for (path, &w) in s.paths.iter().zip(&s.path_weights) {
            assert!((dg[*path.last().unwrap()] - w).abs() < 1e-9);
        }
    }
}

#[test]
fn non_shortest_base_is_a_contract_violation() {
    let g = grid(3, 3);
    assert!(matches!(ss_spanner(&g, &[0, 1, 4, 3], 8, 0.5), Err(SeparatorError::NotShortest(_))));
}

#[test]
fn walk_to_path_stretch_and_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..15 {
        let g = random_grid(6, 6, 1.0, 3.0, &mut rng);
        let base = sp_path(&g, rng.gen_range(0..36), rng.gen_range(0..36));
        let walk = random_walk(&g, rng.gen_range(0..10), &mut rng);
        let eps = rng.gen_range(0.1..0.9);
        let ws = walk_to_path_spanner(&g, &walk, &base, eps).unwrap();
        let h = ws.graph.union(&path_subgraph(&g, &base));
        for &p in &walk {
            let dg = dist(&g, p);
            let dh = dist(&h, p);
            for &q in &base {
                assert!(dh[q] <= (1.0 + 4.0 * eps) * dg[q] * SLACK);
            }
        }
        let bound = 8.0 / (eps * eps) * ((1.0 / eps + 1.0) * ws.walk_weight + ws.r);
        assert!(ws.anchor_weight() <= bound * SLACK);
    }
}

#[test]
fn single_vertex_walk_matches_single_source() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = random_grid(5, 5, 1.0, 2.0, &mut rng);
    let base = sp_path(&g, 0, 24);
    let ws = walk_to_path_spanner(&g, &[7], &base, 0.3).unwrap();
    let s = ss_spanner(&g, &base, 7, 0.3).unwrap();
    assert_eq!(ws.graph, s.to_subgraph(&g));
}

fn crossing_demands(g: &WeightedGraph, base: &[usize], count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    while out.len() < count {
        let (s, t) = (rng.gen_range(0..g.n()), rng.gen_range(0..g.n()));
        if s == t {
            continue;
        }
        let p = sp_path(g, s, t);
        if p.iter().any(|v| base.contains(v)) {
            out.push(p);
        }
    }
    out
}

fn demand_ell(g: &WeightedGraph, demands: &[Vec<usize>]) -> f64 {
    demands
        .iter()
        .map(|p| graph_core::paths::path_weight(g, p).unwrap())
        .fold(0.0, f64::max)
}

fn assert_preserved(g: &WeightedGraph, h: &WeightedGraph, demands: &[Vec<usize>], eps: f64) {
    for p in demands {
        let (s, t) = (p[0], *p.last().unwrap());
        let dg = dist(g, s)[t];
        assert!(dist(h, s)[t] <= (1.0 + eps) * dg * SLACK, "{s} -> {t}");
    }
}

#[test]
fn ptp_single_across_grid_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let g = random_grid(8, 8, 1.0, 2.0, &mut rng);
        let base = sp_path(&g, 0, 63);
        let demands = crossing_demands(&g, &base, 10, &mut rng);
        let ell = demand_ell(&g, &demands).max(2.0);
        let eps = 0.2;
        let h = ptp_single(&g, &base, &demands, ell, eps).unwrap();
        assert_preserved(&g, &h, &demands, eps);
        let mut endpoints: Vec<usize> = demands.iter().flat_map(|p| [p[0], *p.last().unwrap()]).collect();
        endpoints.sort_unstable();
        endpoints.dedup();
        let per = (8.0 / (eps * eps) + 8.0 / eps + 2.0) * ell;
        assert!(h.total_weight() <= endpoints.len() as f64 * per);
    }
}

#[test]
fn ptp_single_demand_on_base_has_stretch_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let g = random_grid(6, 6, 1.0, 3.0, &mut rng);
    let base = sp_path(&g, 0, 35);
    let demand = base[1..base.len() - 1].to_vec();
    let ell = graph_core::paths::path_weight(&g, &demand).unwrap();
    let h = ptp_single(&g, &base, std::slice::from_ref(&demand), ell, 0.3).unwrap();
    let d = dist(&h, demand[0])[*demand.last().unwrap()];
    assert!((d - ell).abs() < 1e-9);
}

#[test]
fn ptp_spanner_reductions_and_overlap() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let g = random_grid(8, 8, 1.0, 2.0, &mut rng);
    let base = sp_path(&g, 0, 63);
    let demands = crossing_demands(&g, &base, 8, &mut rng);
    let ell = demand_ell(&g, &demands);
    assert_eq!(
        ptp_spanner(&g, std::slice::from_ref(&base), &demands, ell, 0.3).unwrap(),
        ptp_single(&g, &base, &demands, ell, 0.3).unwrap()
    );
    for _ in 0..10 {
        let bases: Vec<Vec<usize>> = (0..3).map(|_| sp_path(&g, rng.gen_range(0..64), rng.gen_range(0..64))).collect();
        let all: Vec<usize> = bases.iter().flatten().copied().collect();
        let demands = crossing_demands(&g, &all, 12, &mut rng);
        let ell = demand_ell(&g, &demands);
        let h = ptp_spanner(&g, &bases, &demands, ell, 0.25).unwrap();
        assert_preserved(&g, &h, &demands, 0.25);
    }
}

fn all_pair_check(g: &WeightedGraph, h: &WeightedGraph, terminals: &[usize], ell: f64, eps: f64) -> usize {
    let mut checked = 0;
    for &a in terminals {
        let dg = dist(g, a);
        let dh = dist(h, a);
        for &b in terminals {
            if a != b && dg[b] <= ell {
                checked += 1;
                assert!(dh[b] <= (1.0 + eps) * dg[b] * SLACK, "{a} -> {b}: {} vs {}", dh[b], dg[b]);
            }
        }
    }
    checked
}

#[test]
fn ell_close_on_tree_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..10 {
        let g = random_tree(30, 1.0, 3.0, &mut rng);
        let t = pick_terminals(30, 5, &mut rng);
        let ell = 12.0;
        let demands = terminal_demands(&g, &t, ell, Exec::Sequential).unwrap();
        let out = ell_close_spanner(&g, &t, &demands, ell, 0.2, &CentroidProvider, EllCloseOptions::default()).unwrap();
        all_pair_check(&g, &out.graph, &t, ell, 0.0);
        assert!(out.stats.worst_balance <= 0.5);
    }
}

#[test]
fn ell_close_on_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let g = grid(8, 8);
    let n = g.n() as f64;
    let provider = SptCycleProvider::default();
    for _ in 0..5 {
        let t = pick_terminals(64, 10, &mut rng);
        let (ell, eps) = (6.0, 0.25);
        let demands = terminal_demands(&g, &t, ell, Exec::Parallel).unwrap();
        let out = ell_close_spanner(&g, &t, &demands, ell, eps, &provider, EllCloseOptions::default()).unwrap();
        assert!(all_pair_check(&g, &out.graph, &t, ell, eps) > 0);
        assert!(g.embed_subgraph(&out.graph).is_ok());
        let c = out.graph.total_weight() / (t.len() as f64 * ell * n.log2());
        println!("{}: weight constant {c:.3}, depth {}", provider.name(), out.stats.max_depth);
    }
}

#[test]
fn ell_close_single_terminal_is_empty() {
    let g = grid(4, 4);
    let out = ell_close_spanner(&g, &[5], &[], 3.0, 0.5, &CentroidProvider, EllCloseOptions::default()).unwrap();
    assert_eq!(out.graph.m(), 0);
}

#[test]
fn ell_close_deterministic_across_execution_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let (g, _) = random_geometric(80, 0.25, &mut rng);
    let t = pick_terminals(80, 15, &mut rng);
    let ell = 0.6;
    let demands = terminal_demands(&g, &t, ell, Exec::Parallel).unwrap();
    let run = |exec| {
        let opts = EllCloseOptions { exec, ..Default::default() };
        ell_close_spanner(&g, &t, &demands, ell, 0.3, &SptCycleProvider::default(), opts).unwrap()
    };
    let a = run(Exec::Parallel);
    assert_eq!(a, run(Exec::Parallel));
    assert_eq!(a, run(Exec::Sequential));
    all_pair_check(&g, &a.graph, &t, ell, 0.3);
}

struct Lazy;
impl SeparatorProvider for Lazy {
    fn name(&self) -> &str {
        "lazy"
    }
    fn family(&self, _g: &WeightedGraph) -> SeparatorFamily {
        SeparatorFamily::default()
    }
}

#[test]
fn useless_provider_hits_depth_cap() {
    let g = grid(4, 4);
    let t = vec![0, 15];
    let demands = terminal_demands(&g, &t, 10.0, Exec::Sequential).unwrap();
    let err = ell_close_spanner(&g, &t, &demands, 10.0, 0.5, &Lazy, EllCloseOptions::default()).unwrap_err();
    assert!(matches!(err, SeparatorError::DepthExceeded { cap: 16, .. }));
}

#[test]
fn demands_through_terminals_are_rejected() {
    let g = grid(1, 3);
    let err = ell_close_spanner(&g, &[0, 1, 2], &[vec![0, 1, 2]], 5.0, 0.5, &CentroidProvider, EllCloseOptions::default());
    assert!(matches!(err, Err(SeparatorError::Input(_))));
}

/// Best balance over every pair of root paths on a cycle, by enumeration.
#[test]
fn cycle_separator_is_optimal() {
    let edges: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8, 1.0)).collect();
    let g = WeightedGraph::from_edges(8, &edges).unwrap();
    let f = SptCycleProvider::default().family(&g);
    let mut best = f64::INFINITY;
    for a in 0..8 {
        for b in 0..8 {
            let fam = SeparatorFamily::single(vec![sp_path(&g, 0, a), sp_path(&g, 0, b)]);
            best = best.min(fam.balance(&g));
        }
    }
    assert_eq!(f.balance(&g), best);
    assert_eq!(f.path_count(), 2);
}

#[test]
fn spt_provider_balance_on_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for side in [6, 8, 10, 12] {
        let g = random_grid(side, side, 1.0, 2.0, &mut rng);
        let f = SptCycleProvider::default().family(&g);
        f.verify(&g).unwrap();
        let b = f.balance(&g);
        println!("{side}x{side}: balance {b:.3}");
        assert!(b <= 2.0 / 3.0, "balance {b}");
    }
}

#[test]
fn separator_oracle_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..5 {
        let g = random_grid(7, 7, 1.0, 3.0, &mut rng);
        let o = SeparatorOracle::new(g.clone(), SptCycleProvider::default());
        let q = OracleQuery::new(pick_terminals(49, 12, &mut rng), rng.gen_range(3.0..12.0), 0.3).unwrap();
        let out = o.query(&q).unwrap();
        assert!(check_window(&o, &q, &out).passed());
        all_pair_check(&g, &out, &q.terminals, q.ell, q.eps);
    }
}
