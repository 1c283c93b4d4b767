//! Partition of metric-completion edges by weight scale.

use serde::Serialize;

use graph_core::{MetricEdge, TerminalMetric};

/// Heavy metric edges grouped into scale classes `j` and levels `i`.
///
/// Level `i` of class `j` has scale `ℓ = 2^j·w0/ε^(i+1)` and holds edges of
/// weight in `(ℓ/2, ℓ]`.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeBuckets {
    pub w0: f64,
    pub eps: f64,
    /// Number of scale classes, `⌈log₂(1/ε)⌉`.
    pub classes: usize,
    /// Highest level, `⌈log_{1/ε} k²⌉ − 1` (at least 1).
    pub top_level: usize,
    /// Edges of weight at most `w0/ε`.
    pub cheap: Vec<MetricEdge>,
    /// Heavy edges whose first matching range is at level 0, or that match
    /// no range at all.
    pub direct: Vec<MetricEdge>,
    /// `levels[j][i]` for `i` in `0..=top_level`; level 0 is always empty.
    pub levels: Vec<Vec<Vec<MetricEdge>>>,
}

impl EdgeBuckets {
    pub fn ell(&self, class: usize, level: usize) -> f64 {
        scale(self.w0, self.eps, class, level)
    }

    pub fn bucket(&self, class: usize, level: usize) -> &[MetricEdge] {
        &self.levels[class][level]
    }

    /// Highest non-empty level of a class, if any.
    pub fn highest_level(&self, class: usize) -> Option<usize> {
        (1..=self.top_level).rev().find(|&i| !self.levels[class][i].is_empty())
    }

    pub fn bucketed(&self) -> impl Iterator<Item = (usize, usize, &MetricEdge)> + '_ {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(j, per)| per.iter().enumerate().flat_map(move |(i, b)| b.iter().map(move |e| (j, i, e))))
    }

    pub fn bucketed_count(&self) -> usize {
        self.levels.iter().flatten().map(Vec::len).sum()
    }
}

fn scale(w0: f64, eps: f64, class: usize, level: usize) -> f64 {
    w0 * 2f64.powi(class as i32) / eps.powi(level as i32 + 1)
}

/// Assign every metric edge to the cheap set, a bucket, or the direct set.
///
/// `w0` is `w(MST)/k²`. A heavy edge goes to the first range `(ℓ/2, ℓ]`
/// containing it, scanning levels upward and classes within a level.
pub fn bucket_edges(metric: &TerminalMetric, mst_weight: f64, eps: f64) -> EdgeBuckets {
    let k = metric.k();
    let w0 = if k == 0 { 0.0 } else { mst_weight / (k * k) as f64 };
    let classes = ((1.0 / eps).log2().ceil() as usize).max(1);
    let top_level = if k < 2 {
        1
    } else {
        ((((k * k) as f64).ln() / (1.0 / eps).ln()).ceil() as usize).saturating_sub(1).max(1)
    };
    let mut out = EdgeBuckets {
        w0,
        eps,
        classes,
        top_level,
        cheap: Vec::new(),
        direct: Vec::new(),
        levels: vec![vec![Vec::new(); top_level + 1]; classes],
    };
    for i in 0..k {
        for j in i + 1..k {
            let e = MetricEdge { i, j, w: metric.d(i, j) };
            if e.w <= w0 / eps {
                out.cheap.push(e);
                continue;
            }
            let slot = (0..=top_level)
                .flat_map(|lvl| (0..classes).map(move |c| (c, lvl)))
                .find(|&(c, lvl)| {
                    let ell = scale(w0, eps, c, lvl);
                    e.w > ell / 2.0 && e.w <= ell
                });
            match slot {
                Some((c, lvl)) if lvl > 0 => out.levels[c][lvl].push(e),
                _ => out.direct.push(e),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use graph_core::{metric_completion, WeightedGraph};

    #[test]
    fn two_terminals_are_cheap() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 3.0)]).unwrap();
        let m = metric_completion(&g, &[0, 1]).unwrap();
        let b = bucket_edges(&m, 3.0, 0.03);
        // w0 = 3/4 and w0/ε = 25 ≥ 3.
        assert_eq!(b.cheap.len(), 1);
        assert_eq!(b.bucketed_count(), 0);
        assert!(b.direct.is_empty());
    }

    #[test]
    fn class_and_level_counts() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let m = metric_completion(&g, &[0, 1]).unwrap();
        let b = bucket_edges(&m, 1.0, 0.03);
        assert_eq!(b.classes, 6);
        assert_eq!(b.top_level, 1);
        assert!((b.ell(2, 1) - 0.25 * 4.0 / (0.03 * 0.03)).abs() < 1e-9);
    }
}
