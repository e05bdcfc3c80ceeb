//! Per-p histograms of the subgroup-infinite-cluster proxy count: the
//! finite-volume signature of the zero / one / infinity trichotomy.

use rayon::prelude::*;

use super::mc::{seed_list, validate_p_grid};
use crate::coupling::CouplingField;
use crate::error::{Error, Result};
use crate::groups::{BallGraph, SubgroupId};
use crate::percolation::{clusters, relative_cluster_counts, sample};

#[derive(Debug, Clone)]
pub struct TrichotomyConfig {
    pub p_grid: Vec<f64>,
    /// Proxy threshold: a cluster counts when it has >= m subgroup members
    /// and touches the boundary. Must be >= 2 so singleton boundary
    /// clusters cannot qualify.
    pub m: u64,
    pub samples: u64,
    pub base_seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct TrichotomyRow {
    pub p: f64,
    pub zero: u64,
    pub one: u64,
    pub many: u64,
    pub samples: u64,
}

/// Empirical distribution over {0, 1, >=2} of the proxy count, per grid p.
pub fn trichotomy_scan(
    ball: &BallGraph,
    subgroup: SubgroupId,
    cfg: &TrichotomyConfig,
) -> Result<Vec<TrichotomyRow>> {
    validate_p_grid(&cfg.p_grid)?;
    if cfg.m < 2 {
        return Err(Error::InvalidParameter("proxy threshold m must be >= 2".into()));
    }
    let seeds = seed_list(cfg.base_seed, cfg.samples);
    let mut rows = Vec::with_capacity(cfg.p_grid.len());
    for &p in &cfg.p_grid {
        let buckets: Vec<u8> = seeds
            .par_iter()
            .map(|&s| {
                let field = CouplingField::new(s);
                let config = sample(ball, &field, p).expect("validated p");
                let part = clusters(ball, &config);
                match relative_cluster_counts(&part, subgroup, cfg.m) {
                    0 => 0u8,
                    1 => 1,
                    _ => 2,
                }
            })
            .collect();
        let mut row = TrichotomyRow { p, zero: 0, one: 0, many: 0, samples: cfg.samples };
        for b in buckets {
            match b {
                0 => row.zero += 1,
                1 => row.one += 1,
                _ => row.many += 1,
            }
        }
        rows.push(row);
    }
    Ok(rows)
}
