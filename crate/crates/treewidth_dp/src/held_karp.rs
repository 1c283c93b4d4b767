use graph_core::{metric_completion, WeightedGraph};

use crate::TdError;

pub const HELD_KARP_CAP: usize = 20;

/// Optimal closed walk through all terminals via the bitmask recurrence over
/// the terminal metric. Runs in `O(2^k k^2)`.
pub fn held_karp(graph: &WeightedGraph, terminals: &[usize]) -> Result<f64, TdError> {
    let mut t = terminals.to_vec();
    t.sort_unstable();
    t.dedup();
    let k = t.len();
    if k > HELD_KARP_CAP {
        return Err(TdError::TooManyTerminals { k, cap: HELD_KARP_CAP });
    }
    if k <= 1 {
        for &v in &t {
            graph.check_vertex(v)?;
        }
        return Ok(0.0);
    }
    let m = metric_completion(graph, &t)?;
    // Terminal 0 is the fixed start; masks range over terminals 1..k.
    let r = k - 1;
    let full = (1usize << r) - 1;
    let mut dp = vec![f64::INFINITY; (1 << r) * r];
    for j in 0..r {
        dp[(1 << j) * r + j] = m.d(0, j + 1);
    }
    for mask in 1..=full {
        for j in 0..r {
            let cur = dp[mask * r + j];
            if mask >> j & 1 == 0 || !cur.is_finite() {
                continue;
            }
            for nxt in 0..r {
                if mask >> nxt & 1 == 0 {
                    let slot = &mut dp[(mask | 1 << nxt) * r + nxt];
                    *slot = slot.min(cur + m.d(j + 1, nxt + 1));
                }
            }
        }
    }
    Ok((0..r).map(|j| dp[full * r + j] + m.d(j + 1, 0)).fold(f64::INFINITY, f64::min))
}
