//! Boundary-reach sweeps and the crossing estimate of the critical point.

use rayon::prelude::*;

use super::mc::{seed_list, validate_p_grid};
use crate::coupling::CouplingField;
use crate::error::Result;
use crate::groups::{build_ball, GroupModel};
use crate::percolation::explore::{root_reaches_boundary, LazyBall, MaterialBall, Topology};
use crate::stats::{wilson, Ci};

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub p_grid: Vec<f64>,
    pub samples: u64,
    pub base_seed: u64,
    /// Crossing level for the point estimate of `p_c`.
    pub level: f64,
    pub bisect_iters: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            p_grid: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
            samples: 1000,
            base_seed: 1,
            level: 0.5,
            bisect_iters: 25,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    pub p: f64,
    pub reach: f64,
    pub ci: Ci,
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PcEstimate {
    Crossed(f64),
    /// The curve stays below the level on the whole grid.
    AboveGrid,
    /// The curve is already above the level at the smallest grid point.
    BelowGrid,
}

#[derive(Debug, Clone)]
pub struct CrossingCurve {
    pub radius: u32,
    pub level: f64,
    pub points: Vec<SweepPoint>,
    pub pc: PcEstimate,
}

/// Empirical curve `p -> P(o <-> boundary of B_R)` over a shared coupling
/// field, with the crossing of `level` refined by bisection on the same
/// seeds. Sharing seeds across `p` makes the curve exactly monotone.
pub fn crossing_sweep(model: &GroupModel, radius: u32, cfg: &SweepConfig) -> Result<CrossingCurve> {
    validate_p_grid(&cfg.p_grid)?;
    let seeds = seed_list(cfg.base_seed, cfg.samples);

    // the reach indicator only needs the cluster of the root, so use the
    // implicit ball when the model has a closed-form word metric
    let lazy = LazyBall::new(model, radius);
    let material;
    let reach_frac: Box<dyn Fn(f64) -> u64 + Sync> = match &lazy {
        Ok(top) => Box::new(move |p| count_reaches(top, &seeds, p, radius as u64)),
        Err(_) => {
            material = build_ball(model, radius)?;
            let seeds = seed_list(cfg.base_seed, cfg.samples);
            Box::new(move |p| count_reaches(&MaterialBall(&material), &seeds, p, radius as u64))
        }
    };

    let mut points = Vec::with_capacity(cfg.p_grid.len());
    for &p in &cfg.p_grid {
        let hits = reach_frac(p);
        let (reach, ci) = wilson(hits, cfg.samples, 3.0);
        points.push(SweepPoint { p, reach, ci, samples: cfg.samples });
    }

    let pc = locate_crossing(&points, cfg.level, cfg.bisect_iters, cfg.samples, &reach_frac);
    Ok(CrossingCurve { radius, level: cfg.level, points, pc })
}

fn count_reaches<T: Topology + Sync>(top: &T, seeds: &[u64], p: f64, radius: u64) -> u64 {
    seeds
        .par_iter()
        .map(|&s| root_reaches_boundary(top, &CouplingField::new(s), p, radius) as u64)
        .sum()
}

fn locate_crossing(
    points: &[SweepPoint],
    level: f64,
    iters: u32,
    samples: u64,
    reach_frac: &(dyn Fn(f64) -> u64 + Sync),
) -> PcEstimate {
    if points[0].reach >= level {
        return PcEstimate::BelowGrid;
    }
    let Some(hi_idx) = points.iter().position(|pt| pt.reach >= level) else {
        return PcEstimate::AboveGrid;
    };
    let (mut lo, mut hi) = (points[hi_idx - 1].p, points[hi_idx].p);
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let frac = reach_frac(mid) as f64 / samples as f64;
        if frac < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    PcEstimate::Crossed(0.5 * (lo + hi))
}

/// Run the sweep at `R` and `2R` and report the crossing drift, the
/// finite-size stability diagnostic.
#[derive(Debug, Clone)]
pub struct DoublingReport {
    pub base: CrossingCurve,
    pub doubled: CrossingCurve,
    pub drift: Option<f64>,
}

pub fn crossing_sweep_with_doubling(
    model: &GroupModel,
    radius: u32,
    cfg: &SweepConfig,
) -> Result<DoublingReport> {
    let base = crossing_sweep(model, radius, cfg)?;
    let doubled = crossing_sweep(model, 2 * radius, cfg)?;
    let drift = match (&base.pc, &doubled.pc) {
        (PcEstimate::Crossed(a), PcEstimate::Crossed(b)) => Some((a - b).abs()),
        _ => None,
    };
    Ok(DoublingReport { base, doubled, drift })
}
