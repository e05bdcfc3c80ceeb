//! Two-point connection estimates on a materialized ball.

use rayon::prelude::*;

use super::cluster::UnionFind;
use crate::coupling::CouplingField;
use crate::error::{Error, Result};
use crate::groups::{BallGraph, Elem};
use crate::stats::{wilson, Ci};

/// A frequency estimate of `tau_p(x, y)` with a Wilson interval.
#[derive(Debug, Clone, Copy)]
pub struct TauEstimate {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci: Ci,
}

pub fn tau_from_counts(successes: u64, trials: u64, z: f64) -> TauEstimate {
    let (estimate, ci) = wilson(successes, trials, z);
    TauEstimate { successes, trials, estimate, ci }
}

/// Unbiased frequency estimate of the connection probability between `x`
/// and `y` inside the ball. Truncation only removes connection paths, so
/// the estimand is a lower bound of the infinite-volume two-point function;
/// both endpoints must sit at distance <= R - d(x, y) from the root.
pub fn two_point(
    ball: &BallGraph,
    seeds: &[u64],
    p: f64,
    x: &Elem,
    y: &Elem,
    z: f64,
) -> Result<TauEstimate> {
    let xi = ball
        .index_of(x)
        .ok_or_else(|| Error::VertexOutsideBall(x.display()))?;
    let yi = ball
        .index_of(y)
        .ok_or_else(|| Error::VertexOutsideBall(y.display()))?;
    if xi == yi {
        return Ok(tau_from_counts(seeds.len() as u64, seeds.len() as u64, z));
    }
    let dxy = pair_distance(ball, xi, yi);
    let margin = ball.radius() as u64;
    for (v, d) in [(xi, ball.dist(xi) as u64), (yi, ball.dist(yi) as u64)] {
        if d + dxy > margin {
            return Err(Error::MarginViolated(format!(
                "vertex {} at distance {d} with pair distance {dxy} exceeds radius {margin}",
                ball.vertex(v).display()
            )));
        }
    }
    let successes = count_connections(ball, seeds, p, &[(xi, yi)])[0];
    Ok(tau_from_counts(successes, seeds.len() as u64, z))
}

/// Graph distance between two ball vertices (BFS; exact).
pub fn pair_distance(ball: &BallGraph, x: u32, y: u32) -> u64 {
    if x == y {
        return 0;
    }
    let n = ball.vertex_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    dist[x as usize] = 0;
    queue.push_back(x);
    while let Some(v) = queue.pop_front() {
        for &w in ball.neighbors_of(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                if w == y {
                    return dist[w as usize] as u64;
                }
                queue.push_back(w);
            }
        }
    }
    u64::MAX
}

/// Per-pair connection counts over a shared seed list; one union-find
/// partition per seed answers every pair. Deterministic regardless of
/// thread count: per-seed tallies are merged in seed order.
pub fn count_connections(
    ball: &BallGraph,
    seeds: &[u64],
    p: f64,
    pairs: &[(u32, u32)],
) -> Vec<u64> {
    let per_seed: Vec<Vec<bool>> = seeds
        .par_iter()
        .map(|&seed| {
            let field = CouplingField::new(seed);
            let mut uf = UnionFind::new(ball.vertex_count());
            for e in ball.edges() {
                if field.open(e.key, p) {
                    uf.union(e.a, e.b);
                }
            }
            pairs
                .iter()
                .map(|&(a, b)| uf.find(a) == uf.find(b))
                .collect()
        })
        .collect();
    let mut counts = vec![0u64; pairs.len()];
    for row in per_seed {
        for (c, hit) in counts.iter_mut().zip(row) {
            *c += hit as u64;
        }
    }
    counts
}
