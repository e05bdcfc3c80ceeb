//! Percolation configurations: deterministic thresholding of a coupling
//! field at level `p`.

use crate::coupling::CouplingField;
use crate::error::{Error, Result};
use crate::groups::BallGraph;

/// An open/closed assignment for every edge of a ball, at a fixed `p`.
#[derive(Debug, Clone)]
pub struct Configuration {
    open: Vec<u64>,
    edge_count: usize,
    p: f64,
    seed: u64,
}

/// Threshold the field: edge `e` is open iff `field.value(key(e)) < p`.
pub fn sample(ball: &BallGraph, field: &CouplingField, p: f64) -> Result<Configuration> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0,1]")));
    }
    let edge_count = ball.edge_count();
    let mut open = vec![0u64; edge_count.div_ceil(64)];
    for (i, e) in ball.edges().iter().enumerate() {
        if field.open(e.key, p) {
            open[i / 64] |= 1 << (i % 64);
        }
    }
    Ok(Configuration { open, edge_count, p, seed: field.seed() })
}

impl Configuration {
    #[inline]
    pub fn is_open(&self, edge_index: usize) -> bool {
        (self.open[edge_index / 64] >> (edge_index % 64)) & 1 == 1
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_ball, GroupModel};

    #[test]
    fn extreme_levels() {
        let model = GroupModel::lattice(2).unwrap();
        let ball = build_ball(&model, 3).unwrap();
        let field = CouplingField::new(5);
        assert_eq!(sample(&ball, &field, 0.0).unwrap().open_count(), 0);
        assert_eq!(
            sample(&ball, &field, 1.0).unwrap().open_count(),
            ball.edge_count()
        );
    }

    #[test]
    fn mean_open_fraction_within_binomial_noise() {
        // 9-edge graph, many seeds: mean open fraction within 3 binomial
        // sigma of 1/2
        let model = GroupModel::Finite(crate::groups::finite::s3());
        let ball = build_ball(&model, 3).unwrap();
        assert_eq!(ball.edge_count(), 9);
        let n_seeds = 10_000u64;
        let mut open = 0u64;
        for s in 0..n_seeds {
            open += sample(&ball, &CouplingField::new(s), 0.5).unwrap().open_count() as u64;
        }
        let trials = (n_seeds * 9) as f64;
        let frac = open as f64 / trials;
        let sigma = (0.25 / trials).sqrt();
        assert!((frac - 0.5).abs() < 3.0 * sigma, "frac = {frac}");
    }

    #[test]
    fn nested_in_p() {
        let model = GroupModel::lattice(2).unwrap();
        let ball = build_ball(&model, 4).unwrap();
        let field = CouplingField::new(9);
        let lo = sample(&ball, &field, 0.3).unwrap();
        let hi = sample(&ball, &field, 0.7).unwrap();
        for i in 0..ball.edge_count() {
            if lo.is_open(i) {
                assert!(hi.is_open(i));
            }
        }
    }
}
