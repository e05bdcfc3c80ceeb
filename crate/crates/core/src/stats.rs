//! Statistics helpers: confidence intervals, least-squares fits on
//! transformed scales, block bootstrap, compensated summation.

use crate::coupling::HashStream;

/// A two-sided confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ci {
    pub lo: f64,
    pub hi: f64,
}

impl Ci {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &Ci) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn excludes_zero(&self) -> bool {
        self.lo > 0.0
    }
}

/// Wilson score interval for a binomial proportion at `z` standard errors.
pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, Ci) {
    if trials == 0 {
        return (f64::NAN, Ci { lo: 0.0, hi: 1.0 });
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    (
        phat,
        Ci { lo: (center - half).max(0.0), hi: (center + half).min(1.0) },
    )
}

/// Kahan compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum
    }
}

/// Ordinary least squares `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Some(LineFit { slope, intercept, r2, points: n })
}

/// Mean and `z`-standard-error interval of a sample.
pub fn mean_se(xs: &[f64], z: f64) -> (f64, Ci) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, Ci { lo: mean, hi: mean });
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    (mean, Ci { lo: mean - z * se, hi: mean + z * se })
}

/// Block-bootstrap interval for the mean of a dependent binary/real series.
/// Blocks of length `floor(sqrt(T))` are resampled with replacement;
/// the interval is the `z`-sigma normal interval of the bootstrap means.
pub fn block_bootstrap_ci(series: &[f64], replicates: u32, seed: u64, z: f64) -> (f64, Ci) {
    let t = series.len();
    let mean = series.iter().sum::<f64>() / t.max(1) as f64;
    if t < 4 {
        return (mean, Ci { lo: 0.0, hi: 1.0 });
    }
    let block = (t as f64).sqrt().floor() as usize;
    let n_blocks = t.div_ceil(block);
    let stream = HashStream::new(seed, 0x626f_6f74);
    let mut boot_means = Vec::with_capacity(replicates as usize);
    let mut counter = 0u64;
    for _ in 0..replicates {
        let mut acc = 0.0;
        let mut taken = 0usize;
        for _ in 0..n_blocks {
            let start = stream.below_at(counter, (t - block + 1) as u64) as usize;
            counter += 1;
            let take = block.min(t - taken);
            acc += series[start..start + take].iter().sum::<f64>();
            taken += take;
            if taken >= t {
                break;
            }
        }
        boot_means.push(acc / taken as f64);
    }
    let bm = boot_means.iter().sum::<f64>() / boot_means.len() as f64;
    let var = boot_means.iter().map(|x| (x - bm) * (x - bm)).sum::<f64>()
        / (boot_means.len() - 1) as f64;
    let sd = var.sqrt();
    (mean, Ci { lo: mean - z * sd, hi: mean + z * sd })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_basics() {
        let (phat, ci) = wilson(50, 100, 3.0);
        assert!((phat - 0.5).abs() < 1e-12);
        assert!(ci.lo < 0.5 && ci.hi > 0.5);
        let (_, zero) = wilson(0, 100, 3.0);
        assert_eq!(zero.lo, 0.0);
        assert!(zero.hi > 0.0 && zero.hi < 0.1);
    }

    #[test]
    fn fit_recovers_exact_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x).collect();
        let fit = fit_line(&xs, &ys).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!((fit.intercept - 3.0).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kahan_handles_cancellation() {
        let mut k = Kahan::default();
        for _ in 0..1_000_000 {
            k.add(0.1);
        }
        assert!((k.total() - 100_000.0).abs() < 1e-6);
    }

    #[test]
    fn bootstrap_covers_iid_mean() {
        let series: Vec<f64> = (0..10_000)
            .map(|i| ((crate::coupling::mix64(i) >> 63) & 1) as f64)
            .collect();
        let (mean, ci) = block_bootstrap_ci(&series, 200, 7, 3.0);
        assert!(ci.contains(mean));
        assert!(ci.contains(0.5), "ci = {ci:?}");
    }
}
