//! Greedy r-nets.

use crate::points::PointSet;

/// Scan `subset` in order and keep a point when it is farther than `r` from
/// every point kept so far. The result covers `subset` within `r` and its
/// points are pairwise more than `r` apart.
pub fn r_net(space: &PointSet, subset: &[usize], r: f64) -> Vec<usize> {
    assert!(r > 0.0, "net radius must be positive");
    let mut net: Vec<usize> = Vec::new();
    for &p in subset {
        if net.iter().all(|&q| space.dist(p, q) > r) {
            net.push(p);
        }
    }
    net
}

/// Nearest net point to `p`, ties broken by smaller id.
pub fn nearest(space: &PointSet, net: &[usize], p: usize) -> Option<usize> {
    net.iter().copied().min_by(|&a, &b| space.dist(p, a).total_cmp(&space.dist(p, b)).then(a.cmp(&b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spaced_points_all_kept() {
        let s = PointSet::from_coords((0..5).map(|i| vec![2.0 * i as f64]).collect()).unwrap();
        assert_eq!(r_net(&s, &[0, 1, 2, 3, 4], 1.0), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn identical_points_collapse() {
        let s = PointSet::from_coords(vec![vec![1.0, 1.0]; 4]).unwrap();
        assert_eq!(r_net(&s, &[0, 1, 2, 3], 0.5), vec![0]);
    }

    #[test]
    fn empty_subset() {
        let s = PointSet::from_coords(vec![vec![0.0]]).unwrap();
        assert!(r_net(&s, &[], 1.0).is_empty());
    }
}
