//! Uniqueness-criterion probe: does the minimum two-point estimate over
//! subgroup pairs decay across distance scales, or stay bounded below?

use rayon::prelude::*;

use super::mc::{ball_sphere_around, sample_at_distance, sample_interior, seed_list};
use crate::coupling::{CouplingField, HashStream};
use crate::error::{Error, Result};
use crate::groups::{build_ball, edge_key, GroupModel, SubgroupSpec};
use crate::percolation::two_point::count_connections;
use crate::stats::{wilson, Ci};

#[derive(Debug, Clone)]
pub struct PuProbeConfig {
    pub p: f64,
    pub distance_grid: Vec<u64>,
    pub pairs_per_scale: u32,
    pub samples: u64,
    pub base_seed: u64,
}

impl Default for PuProbeConfig {
    fn default() -> Self {
        PuProbeConfig {
            p: 0.5,
            distance_grid: vec![2, 4, 8, 16, 32],
            pairs_per_scale: 4,
            samples: 10_000,
            base_seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PuVerdict {
    /// The minimum estimate halves at least twice along the grid with
    /// non-overlapping intervals.
    Decay,
    /// The final interval excludes zero and lies above half the first
    /// value.
    BoundedBelow,
    Inconclusive,
}

impl PuVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            PuVerdict::Decay => "decay",
            PuVerdict::BoundedBelow => "bounded-below",
            PuVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PuScale {
    pub d: u64,
    pub tau_min: f64,
    pub ci: Ci,
    pub successes: u64,
    pub trials: u64,
}

#[derive(Debug, Clone)]
pub struct PuProbeReport {
    pub p: f64,
    pub scales: Vec<PuScale>,
    pub verdict: PuVerdict,
}

/// Probe the non-decay criterion for uniqueness of the subgroup-infinite
/// cluster: estimate `min tau_p(x, y)` over sampled subgroup pairs at each
/// distance scale and classify the profile.
pub fn pu_probe(
    model: &GroupModel,
    subgroup: &SubgroupSpec,
    radius: u32,
    cfg: &PuProbeConfig,
) -> Result<PuProbeReport> {
    if cfg.distance_grid.is_empty() || cfg.distance_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DegenerateGrid("distance grid must be increasing".into()));
    }
    let max_d = *cfg.distance_grid.last().unwrap();
    if 2 * max_d > radius as u64 {
        return Err(Error::MarginViolated(format!(
            "distance {max_d} needs radius >= {}",
            2 * max_d
        )));
    }
    let counts = pair_counts(model, subgroup, radius, cfg)?;
    let mut scales = Vec::with_capacity(cfg.distance_grid.len());
    for (si, &d) in cfg.distance_grid.iter().enumerate() {
        let row = &counts[si * cfg.pairs_per_scale as usize..(si + 1) * cfg.pairs_per_scale as usize];
        let &s = row.iter().min().unwrap();
        let (tau_min, ci) = wilson(s, cfg.samples, 3.0);
        scales.push(PuScale { d, tau_min, ci, successes: s, trials: cfg.samples });
    }
    let verdict = classify(&scales);
    Ok(PuProbeReport { p: cfg.p, scales, verdict })
}

/// Decision rule: "decay" when the minimum sequence halves at least twice
/// with non-overlapping intervals; otherwise "bounded below" when the final
/// interval excludes zero and sits above half the first value; otherwise
/// inconclusive.
fn classify(scales: &[PuScale]) -> PuVerdict {
    let mut halvings = 0;
    let mut anchor = &scales[0];
    for s in &scales[1..] {
        if s.tau_min <= anchor.tau_min / 2.0 && !s.ci.overlaps(&anchor.ci) {
            halvings += 1;
            anchor = s;
            if halvings >= 2 {
                return PuVerdict::Decay;
            }
        }
    }
    let first = &scales[0];
    let last = scales.last().unwrap();
    if last.ci.lo > 0.0 && last.ci.lo > first.tau_min / 2.0 {
        return PuVerdict::BoundedBelow;
    }
    PuVerdict::Inconclusive
}

/// Connection counts for `pairs_per_scale` subgroup pairs at each scale.
fn pair_counts(
    model: &GroupModel,
    subgroup: &SubgroupSpec,
    radius: u32,
    cfg: &PuProbeConfig,
) -> Result<Vec<u64>> {
    let seeds = seed_list(cfg.base_seed, cfg.samples);
    let is_all = matches!(subgroup.rule, crate::groups::MembershipRule::All);
    if model.is_tree() && is_all {
        // exact route: tau = P(geodesic open)
        let mut paths: Vec<Vec<u64>> = Vec::new();
        for &d in &cfg.distance_grid {
            let margin = ((radius as u64 - 2 * d) as u32).min(radius / 4);
            for j in 0..cfg.pairs_per_scale {
                let idx = (d * 977 + j as u64) ^ cfg.base_seed;
                let x = sample_interior(model, margin, cfg.base_seed ^ 0x7075, idx)?;
                let y = sample_at_distance(model, &x, d, cfg.base_seed ^ 0x7076, idx)?;
                let path = model.geodesic(&x, &y)?.expect("tree geodesic");
                paths.push(path.windows(2).map(|w| edge_key(&w[0], &w[1])).collect());
            }
        }
        Ok(paths
            .par_iter()
            .map(|keys| {
                seeds
                    .iter()
                    .filter(|&&s| {
                        let f = CouplingField::new(s);
                        keys.iter().all(|&k| f.open(k, cfg.p))
                    })
                    .count() as u64
            })
            .collect())
    } else {
        let ball = build_ball(model, radius)?;
        let member: Vec<bool> = (0..ball.vertex_count() as u32)
            .map(|i| subgroup.matches(model, ball.vertex(i)).unwrap_or(false))
            .collect();
        let mut pairs = Vec::new();
        for &d in &cfg.distance_grid {
            let margin = ((radius as u64 - 2 * d) as u32).min(radius / 4);
            for j in 0..cfg.pairs_per_scale {
                let idx = (d * 977 + j as u64) ^ cfg.base_seed;
                let x = sample_member_vertex(model, &ball, &member, margin, cfg.base_seed, idx)?;
                let sphere: Vec<u32> = ball_sphere_around(&ball, x, d)
                    .into_iter()
                    .filter(|&v| member[v as usize] && ball.dist(v) as u64 + d <= radius as u64)
                    .collect();
                if sphere.is_empty() {
                    return Err(Error::InsufficientSamples(format!(
                        "no subgroup member at distance {d} from a sampled member"
                    )));
                }
                let pick = HashStream::new(cfg.base_seed ^ 0x7077, idx)
                    .below_at(0, sphere.len() as u64) as usize;
                pairs.push((x, sphere[pick]));
            }
        }
        Ok(count_connections(&ball, &seeds, cfg.p, &pairs))
    }
}

fn sample_member_vertex(
    model: &GroupModel,
    ball: &crate::groups::BallGraph,
    member: &[bool],
    margin: u32,
    seed: u64,
    idx: u64,
) -> Result<u32> {
    for attempt in 0..256u64 {
        let v = sample_interior(model, margin, seed ^ 0x7078 ^ (attempt << 32), idx)?;
        if let Some(i) = ball.index_of(&v) {
            if member[i as usize] {
                return Ok(i);
            }
        }
    }
    Err(Error::InsufficientSamples("no subgroup member found near the root".into()))
}

/// Bisection of the decay / bounded-below flag between two probe levels.
/// Returns the final bracket; `Inconclusive` probes shrink it toward the
/// decaying side.
pub fn pu_bisection(
    model: &GroupModel,
    subgroup: &SubgroupSpec,
    radius: u32,
    cfg: &PuProbeConfig,
    p_decay: f64,
    p_unique: f64,
    iters: u32,
) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (p_decay, p_unique);
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let report = pu_probe(model, subgroup, radius, &PuProbeConfig { p: mid, ..cfg.clone() })?;
        match report.verdict {
            PuVerdict::BoundedBelow => hi = mid,
            _ => lo = mid,
        }
    }
    Ok((lo, hi))
}
