//! Two-point infima over word-distance scales and the supermultiplicativity
//! audit of `kappa_p(n)`.

use rayon::prelude::*;

use super::mc::{ball_sphere_around, sample_at_distance, sample_interior, seed_list};
use crate::coupling::{CouplingField, HashStream};
use crate::error::{Error, Result};
use crate::groups::{build_ball, edge_key, Elem, GroupModel};
use crate::percolation::two_point::count_connections;
use crate::stats::{wilson, Ci};

#[derive(Debug, Clone)]
pub struct KappaConfig {
    pub p: f64,
    pub n_max: u64,
    pub pairs_per_n: u32,
    pub samples: u64,
    pub base_seed: u64,
}

impl Default for KappaConfig {
    fn default() -> Self {
        KappaConfig { p: 0.3, n_max: 8, pairs_per_n: 4, samples: 10_000, base_seed: 1 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KappaPoint {
    pub n: u64,
    /// Min over sampled pairs at word distance <= n of the estimated
    /// connection probability.
    pub kappa: f64,
    pub ci: Ci,
    pub successes: u64,
    pub trials: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct SupermultAudit {
    pub m: u64,
    pub n: u64,
    /// `kappa(m + n)`.
    pub lhs: f64,
    /// `kappa(m) * kappa(n)`.
    pub product: f64,
    /// Three-sigma allowance from the binomial noise of the three factors.
    pub slack: f64,
    pub violated: bool,
}

#[derive(Debug, Clone)]
pub struct KappaCurve {
    pub p: f64,
    pub points: Vec<KappaPoint>,
    pub audits: Vec<SupermultAudit>,
    /// `sup_n kappa(n)^{1/n}`, the growth-rate estimate.
    pub growth_rate_sup: f64,
}

/// Estimate `kappa_p(n)` for `n = 1..=n_max` from `pairs_per_n` sampled
/// pairs at each exact distance, sharing one coupling field per seed across
/// all pairs and all scales.
pub fn kappa_curve(model: &GroupModel, radius: u32, cfg: &KappaConfig) -> Result<KappaCurve> {
    if cfg.n_max == 0 || cfg.pairs_per_n == 0 || cfg.samples == 0 {
        return Err(Error::InvalidParameter("kappa needs n_max, pairs, samples >= 1".into()));
    }
    if 2 * cfg.n_max > radius as u64 {
        return Err(Error::MarginViolated(format!(
            "n_max {} needs radius >= {}",
            cfg.n_max,
            2 * cfg.n_max
        )));
    }
    // pairs[(m-1) * pairs_per_n + j] lives at distance exactly m
    let per_pair = sample_pair_taus(model, radius, cfg)?;

    let mut points: Vec<KappaPoint> = Vec::with_capacity(cfg.n_max as usize);
    let mut best: Option<(u64, u64)> = None; // (successes, trials) of the running min
    for m in 1..=cfg.n_max {
        for j in 0..cfg.pairs_per_n as usize {
            let (s, t) = per_pair[(m as usize - 1) * cfg.pairs_per_n as usize + j];
            let better = match best {
                None => true,
                Some((bs, bt)) => (s as u128) * (bt as u128) < (bs as u128) * (t as u128),
            };
            if better {
                best = Some((s, t));
            }
        }
        let (s, t) = best.unwrap();
        let (kappa, ci) = wilson(s, t, 3.0);
        points.push(KappaPoint { n: m, kappa, ci, successes: s, trials: t });
    }

    let audits = audit_supermultiplicativity(&points);
    let growth_rate_sup = points
        .iter()
        .map(|pt| pt.kappa.powf(1.0 / pt.n as f64))
        .fold(0.0f64, f64::max);
    Ok(KappaCurve { p: cfg.p, points, audits, growth_rate_sup })
}

/// Connection counts per sampled pair. Tree models check the unique
/// geodesic (exact); other models run one union-find partition per seed
/// over a materialized ball.
fn sample_pair_taus(
    model: &GroupModel,
    radius: u32,
    cfg: &KappaConfig,
) -> Result<Vec<(u64, u64)>> {
    let seeds = seed_list(cfg.base_seed, cfg.samples);
    if model.is_tree() {
        let mut paths: Vec<Vec<u64>> = Vec::new();
        for m in 1..=cfg.n_max {
            let cap = (radius as u64 - 2 * m) as u32;
            for j in 0..cfg.pairs_per_n {
                let idx = (m * 1000 + j as u64) ^ cfg.base_seed;
                let x = sample_interior(model, cap.min(radius / 4), cfg.base_seed ^ 0x6b70, idx)?;
                let y = sample_at_distance(model, &x, m, cfg.base_seed ^ 0x6b71, idx)?;
                let path = model
                    .geodesic(&x, &y)?
                    .expect("tree models have geodesics");
                paths.push(path.windows(2).map(|w| edge_key(&w[0], &w[1])).collect());
            }
        }
        let counts: Vec<u64> = paths
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
            .collect();
        Ok(counts.into_iter().map(|c| (c, cfg.samples)).collect())
    } else {
        let ball = build_ball(model, radius)?;
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for m in 1..=cfg.n_max {
            let cap = (radius as u64 - 2 * m) as u32;
            for j in 0..cfg.pairs_per_n {
                let idx = (m * 1000 + j as u64) ^ cfg.base_seed;
                let x = loop_sample_in_ball(model, &ball, cap.min(radius / 4), cfg.base_seed, idx)?;
                let sphere = ball_sphere_around(&ball, x, m);
                if sphere.is_empty() {
                    return Err(Error::InsufficientSamples(format!(
                        "no vertices at distance {m} from sampled source"
                    )));
                }
                let pick = HashStream::new(cfg.base_seed ^ 0x6b72, idx)
                    .below_at(0, sphere.len() as u64) as usize;
                pairs.push((x, sphere[pick]));
            }
        }
        let counts = count_connections(&ball, &seeds, cfg.p, &pairs);
        Ok(counts.into_iter().map(|c| (c, cfg.samples)).collect())
    }
}

fn loop_sample_in_ball(
    model: &GroupModel,
    ball: &crate::groups::BallGraph,
    margin: u32,
    seed: u64,
    idx: u64,
) -> Result<u32> {
    for attempt in 0..64u64 {
        let v: Elem = sample_interior(model, margin, seed ^ 0x6b70 ^ (attempt << 32), idx)?;
        if let Some(i) = ball.index_of(&v) {
            return Ok(i);
        }
    }
    Err(Error::InsufficientSamples("interior sampling failed".into()))
}

fn audit_supermultiplicativity(points: &[KappaPoint]) -> Vec<SupermultAudit> {
    // Wilson half-widths carry the 3-sigma scale and stay positive at zero
    // counts, unlike the plain binomial standard error
    let hw = |pt: &KappaPoint| (pt.ci.hi - pt.ci.lo) / 2.0;
    let mut audits = Vec::new();
    let n_max = points.len() as u64;
    for m in 1..=n_max {
        for n in m..=n_max {
            if m + n > n_max {
                continue;
            }
            let (pm, pn, pmn) = (
                &points[m as usize - 1],
                &points[n as usize - 1],
                &points[(m + n) as usize - 1],
            );
            let product = pm.kappa * pn.kappa;
            let slack =
                (hw(pmn).powi(2) + (pm.kappa * hw(pn)).powi(2) + (pn.kappa * hw(pm)).powi(2))
                    .sqrt();
            audits.push(SupermultAudit {
                m,
                n,
                lhs: pmn.kappa,
                product,
                slack,
                violated: pmn.kappa < product - slack,
            });
        }
    }
    audits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_one_gives_kappa_one() {
        let model = GroupModel::free(2).unwrap();
        let cfg = KappaConfig {
            p: 1.0,
            n_max: 4,
            pairs_per_n: 2,
            samples: 50,
            base_seed: 5,
        };
        let curve = kappa_curve(&model, 16, &cfg).unwrap();
        for pt in &curve.points {
            assert_eq!(pt.kappa, 1.0);
        }
        assert!(curve.audits.iter().all(|a| !a.violated));
        assert!((curve.growth_rate_sup - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tree_kappa_matches_p_to_the_n() {
        let model = GroupModel::free(2).unwrap();
        let cfg = KappaConfig {
            p: 0.5,
            n_max: 5,
            pairs_per_n: 3,
            samples: 20_000,
            base_seed: 17,
        };
        let curve = kappa_curve(&model, 20, &cfg).unwrap();
        for pt in &curve.points {
            let exact = 0.5f64.powi(pt.n as i32);
            assert!(
                pt.ci.contains(exact),
                "kappa({}) = {} vs exact {exact}",
                pt.n,
                pt.kappa
            );
        }
    }

    #[test]
    fn kappa_is_monotone_in_p_on_shared_seeds() {
        let model = GroupModel::free(2).unwrap();
        let mk = |p| KappaConfig { p, n_max: 4, pairs_per_n: 3, samples: 800, base_seed: 31 };
        let lo = kappa_curve(&model, 16, &mk(0.3)).unwrap();
        let hi = kappa_curve(&model, 16, &mk(0.5)).unwrap();
        for (a, b) in lo.points.iter().zip(&hi.points) {
            assert!(a.kappa <= b.kappa, "exact coupling monotonicity at n = {}", a.n);
        }
    }

    #[test]
    fn kappa_is_non_increasing() {
        let model = GroupModel::lattice(2).unwrap();
        let cfg = KappaConfig {
            p: 0.45,
            n_max: 3,
            pairs_per_n: 2,
            samples: 500,
            base_seed: 23,
        };
        let curve = kappa_curve(&model, 8, &cfg).unwrap();
        for w in curve.points.windows(2) {
            assert!(w[0].kappa >= w[1].kappa);
        }
    }
}
