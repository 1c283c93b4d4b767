//! Instance families used by tests, benchmarks and the generator CLI.
//!
//! Every builder takes an explicit RNG so that a seeded generator gives the
//! same instance on every platform.

use rand::seq::index::sample;
use rand::Rng;

use crate::graph::{UnionFind, WeightedGraph};

/// `rows × cols` grid, vertex `r * cols + c`, unit weights.
pub fn grid(rows: usize, cols: usize) -> WeightedGraph {
    grid_weighted(rows, cols, |_, _| 1.0)
}

/// Grid whose edge weights come from `weight(u, v)`.
pub fn grid_weighted(rows: usize, cols: usize, mut weight: impl FnMut(usize, usize) -> f64) -> WeightedGraph {
    let mut g = WeightedGraph::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                g.add_edge(v, v + 1, weight(v, v + 1)).expect("grid edge");
            }
            if r + 1 < rows {
                g.add_edge(v, v + cols, weight(v, v + cols)).expect("grid edge");
            }
        }
    }
    g
}

/// Grid with independent uniform weights in `[lo, hi)`.
pub fn random_grid<R: Rng>(rows: usize, cols: usize, lo: f64, hi: f64, rng: &mut R) -> WeightedGraph {
    grid_weighted(rows, cols, |_, _| rng.gen_range(lo..hi))
}

/// Uniform random points in the unit square joined when closer than
/// `radius`, weighted by Euclidean length, then made connected by linking
/// components through their closest point pair.
pub fn random_geometric<R: Rng>(n: usize, radius: f64, rng: &mut R) -> (WeightedGraph, Vec<Vec<f64>>) {
    let pts = unit_points(n, 2, rng);
    let mut g = WeightedGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let d = euclid(&pts[i], &pts[j]);
            if d <= radius && d > 0.0 {
                g.add_edge(i, j, d).expect("geometric edge");
            }
        }
    }
    loop {
        let comps = g.components();
        if comps.len() <= 1 {
            break;
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for &a in &comps[0] {
            for other in &comps[1..] {
                for &b in other {
                    let d = euclid(&pts[a], &pts[b]);
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, a, b));
                    }
                }
            }
        }
        let (d, a, b) = best.expect("two components");
        g.add_edge(a, b, d.max(f64::MIN_POSITIVE)).expect("bridge edge");
    }
    (g, pts)
}

/// Random recursive tree: vertex `v > 0` attaches to a uniform earlier vertex.
pub fn random_tree<R: Rng>(n: usize, lo: f64, hi: f64, rng: &mut R) -> WeightedGraph {
    let mut g = WeightedGraph::new(n);
    for v in 1..n {
        let p = rng.gen_range(0..v);
        let w = if lo == hi { lo } else { rng.gen_range(lo..hi) };
        g.add_edge(p, v, w).expect("tree edge");
    }
    g
}

/// Uniform points in the unit cube of the given dimension.
pub fn unit_points<R: Rng>(n: usize, dim: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect()
}

/// Integer lattice points `side × side` with unit spacing.
pub fn lattice_points(side: usize) -> Vec<Vec<f64>> {
    (0..side * side).map(|v| vec![(v / side) as f64, (v % side) as f64]).collect()
}

/// Complete graph over points weighted by Euclidean distance. Coincident
/// points are skipped.
pub fn complete_euclidean(points: &[Vec<f64>]) -> WeightedGraph {
    let n = points.len();
    let mut g = WeightedGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let d = euclid(&points[i], &points[j]);
            if d > 0.0 {
                g.add_edge(i, j, d).expect("complete edge");
            }
        }
    }
    g
}

/// Unit-weight path on `n` vertices plus a unit-weight clique on
/// `⌈√n⌉` vertices spread evenly along the path.
pub fn path_plus_clique(n: usize) -> (WeightedGraph, Vec<usize>) {
    let mut g = WeightedGraph::new(n);
    for v in 1..n {
        g.add_edge(v - 1, v, 1.0).expect("path edge");
    }
    let s = (n as f64).sqrt().ceil() as usize;
    let clique: Vec<usize> = if s == 0 { Vec::new() } else { (0..s).map(|i| i * n / s).collect() };
    for (a, &x) in clique.iter().enumerate() {
        for &y in &clique[a + 1..] {
            if g.edge_between(x, y).is_none() {
                g.add_edge(x, y, 1.0).expect("clique edge");
            }
        }
    }
    (g, clique)
}

/// `k` distinct vertices out of `n`, sorted.
pub fn pick_terminals<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut t = sample(rng, n, k.min(n)).into_vec();
    t.sort_unstable();
    t
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Whether the graph is connected (an empty graph counts as connected).
pub fn is_connected(g: &WeightedGraph) -> bool {
    let mut uf = UnionFind::new(g.n());
    let mut parts = g.n();
    for e in g.edges() {
        if uf.union(e.u, e.v) {
            parts -= 1;
        }
    }
    parts <= 1
}
