//! Shared Monte Carlo plumbing: seed lists, deterministic interior-vertex
//! sampling, pair sampling at exact word distance, and grid builders.

use crate::coupling::HashStream;
use crate::error::{Error, Result};
use crate::groups::{BallGraph, Elem, GroupModel};

pub fn seed_list(base: u64, n: u64) -> Vec<u64> {
    (0..n).map(|i| base.wrapping_add(i)).collect()
}

/// Endpoint of a seeded walk of length `<= max_dist` from the root; a cheap
/// deterministic source of interior vertices for any model family.
pub fn sample_interior(model: &GroupModel, max_dist: u32, seed: u64, idx: u64) -> Result<Elem> {
    let stream = HashStream::new(seed, 0x736f_7572 ^ idx);
    let len = stream.below_at(0, max_dist as u64 + 1);
    let mut v = model.identity();
    for step in 0..len {
        let nbrs = model.neighbors(&v)?;
        v = nbrs[stream.below_at(step + 1, nbrs.len() as u64) as usize].clone();
    }
    Ok(v)
}

/// A vertex `y` at word distance exactly `d` from `x`, sampled
/// deterministically. Exact for free groups and lattices; other families
/// use breadth-first spheres on a materialized ball.
pub fn sample_at_distance(
    model: &GroupModel,
    x: &Elem,
    d: u64,
    seed: u64,
    idx: u64,
) -> Result<Elem> {
    let stream = HashStream::new(seed, 0x6469_7374 ^ idx);
    match model {
        GroupModel::Free { k } => {
            let Elem::Free(_) = x else {
                return Err(Error::ModelMismatch("free word".into()));
            };
            let letters = 2 * *k as u64;
            let mut w: Vec<u8> = Vec::with_capacity(d as usize);
            for i in 0..d {
                let l = if let Some(&last) = w.last() {
                    // avoid the cancelling letter so the word stays reduced
                    let pick = stream.below_at(i, letters - 1) as u8;
                    let forbidden = last ^ 1;
                    if pick >= forbidden {
                        pick + 1
                    } else {
                        pick
                    }
                } else {
                    stream.below_at(i, letters) as u8
                };
                w.push(l);
            }
            model.multiply(x, &Elem::Free(w))
        }
        GroupModel::Lattice { d: dim } => {
            let Elem::Lattice(_) = x else {
                return Err(Error::ModelMismatch("lattice point".into()));
            };
            // random signed composition of d over the axes
            let mut v = vec![0i64; *dim];
            let mut signs = vec![0i64; *dim];
            for (a, s) in signs.iter_mut().enumerate() {
                *s = if stream.below_at(1000 + a as u64, 2) == 0 { 1 } else { -1 };
            }
            for i in 0..d {
                let axis = stream.below_at(i, *dim as u64) as usize;
                v[axis] += signs[axis];
            }
            model.multiply(x, &Elem::Lattice(v))
        }
        _ => Err(Error::UnsupportedFamily(format!(
            "exact-distance sampling on {} needs a materialized ball",
            model.dsl_name()
        ))),
    }
}

/// Vertices of a materialized ball at BFS distance exactly `d` from `x`.
pub fn ball_sphere_around(ball: &BallGraph, x: u32, d: u64) -> Vec<u32> {
    let n = ball.vertex_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    dist[x as usize] = 0;
    queue.push_back(x);
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        if dist[v as usize] as u64 == d {
            out.push(v);
            continue; // no need to expand past the sphere
        }
        for &w in ball.neighbors_of(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    out
}

/// Geometric grid `1, 2, 3, 4, 6, 8, 11, 16, ...` (ratio ~ sqrt 2) up to
/// `n_max`, used for power-law tails.
pub fn log_grid(n_max: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut x = 1.0f64;
    while (x.round() as u64) <= n_max {
        let v = x.round() as u64;
        if out.last() != Some(&v) {
            out.push(v);
        }
        x *= std::f64::consts::SQRT_2;
    }
    out
}

/// Uniformly spaced probability grid.
pub fn linear_p_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
        return Err(Error::DegenerateGrid(format!("[{lo}, {hi}] x {points}")));
    }
    Ok((0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect())
}

pub fn validate_p_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::DegenerateGrid("empty p grid".into()));
    }
    for w in grid.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::DegenerateGrid("p grid not strictly increasing".into()));
        }
    }
    if grid[0] < 0.0 || *grid.last().unwrap() > 1.0 {
        return Err(Error::DegenerateGrid("p grid outside [0,1]".into()));
    }
    Ok(())
}
