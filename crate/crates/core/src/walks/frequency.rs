//! Cluster frequency along a walk and the max-frequency cluster selection.

use super::walk::WalkPath;
use crate::coupling::HashStream;
use crate::error::{Error, Result};
use crate::percolation::ClusterPartition;
use crate::stats::{block_bootstrap_ci, Ci};

/// Empirical frequency of a cluster along a walk, `(1/T) sum 1(Z_i in K)`
/// over `i = 1..=T`, with a block-bootstrap interval (block length
/// `sqrt(T)`).
#[derive(Debug, Clone, Copy)]
pub struct FrequencyEstimate {
    pub cluster: u32,
    pub steps: u64,
    pub value: f64,
    pub ci: Ci,
}

pub fn frequency(
    partition: &ClusterPartition,
    path: &WalkPath,
    cluster: u32,
) -> Result<FrequencyEstimate> {
    if path.steps() == 0 {
        return Err(Error::EmptyWalk);
    }
    let series: Vec<f64> = path.positions[1..]
        .iter()
        .map(|&v| (partition.cluster_of(v) == cluster) as u64 as f64)
        .collect();
    let (value, ci) = block_bootstrap_ci(&series, 200, path.seed ^ 0x66726571, 3.0);
    Ok(FrequencyEstimate { cluster, steps: path.steps(), value, ci })
}

/// Frequency of an arbitrary vertex set along a walk (no bootstrap).
pub fn set_frequency(mask: &[bool], path: &WalkPath) -> Result<f64> {
    if path.steps() == 0 {
        return Err(Error::EmptyWalk);
    }
    let hits = path.positions[1..]
        .iter()
        .filter(|&&v| mask[v as usize])
        .count();
    Ok(hits as f64 / path.steps() as f64)
}

/// Time spent in every cluster, as exact step counts. The counts sum to
/// `T`: frequency is finitely additive and the clusters partition the
/// ball, so the total is 1 exactly.
pub fn cluster_step_counts(partition: &ClusterPartition, path: &WalkPath) -> Vec<u64> {
    let mut counts = vec![0u64; partition.cluster_count()];
    for &v in &path.positions[1..] {
        counts[partition.cluster_of(v) as usize] += 1;
    }
    counts
}

/// A uniformly random choice among the clusters attaining the maximum
/// frequency, tie-broken by a seeded draw. Errors when every frequency is
/// zero (empty walk).
pub fn max_frequency_cluster(
    partition: &ClusterPartition,
    path: &WalkPath,
    tie_seed: u64,
) -> Result<u32> {
    let counts = cluster_step_counts(partition, path);
    let max = *counts.iter().max().unwrap_or(&0);
    if max == 0 {
        return Err(Error::EmptyWalk);
    }
    let ties: Vec<u32> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == max)
        .map(|(i, _)| i as u32)
        .collect();
    let pick = HashStream::new(tie_seed, 0x746965).below_at(0, ties.len() as u64) as usize;
    Ok(ties[pick])
}
