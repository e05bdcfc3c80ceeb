//! Two exact routes to the derivative of an increasing event's
//! probability: polynomial differentiation against the covariance sum
//! (Russo-Margulis). On finite systems they agree identically.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::event::{verify_increasing, Event};
use super::report::OracleReport;
use super::system::{enumerate_rational, rational_to_f64, FiniteSystem};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct RussoCheck {
    /// d/dp P_p(f), by exact differentiation of the polynomial in p.
    pub derivative: f64,
    /// (1 / p(1-p)) * sum_e Cov(f, omega(e)), exact.
    pub covariance_sum: f64,
    pub gap: f64,
    pub holds: bool,
}

pub fn russo_check(sys: &FiniteSystem, f: &Event, p: &BigRational) -> Result<RussoCheck> {
    verify_increasing(sys, f, 0)?;
    let e = sys.edge_count();

    // tally of f by open-edge count: P_p(f) = sum_k counts[k] p^k (1-p)^(E-k)
    let mut counts = vec![0u64; e + 1];
    // covariance pieces at the given p
    let mut ef = BigRational::zero();
    let mut efw = vec![BigRational::zero(); e];
    enumerate_rational(sys, p, |mask, w| {
        let comp = sys.components(mask);
        if f.eval(sys, &comp, mask, 0) {
            counts[mask.count_ones() as usize] += 1;
            ef += w;
            for (edge, acc) in efw.iter_mut().enumerate() {
                if (mask >> edge) & 1 == 1 {
                    *acc += w;
                }
            }
        }
    });

    // route 1: exact polynomial derivative
    // d/dp [p^k q^(E-k)] = k p^(k-1) q^(E-k) - (E-k) p^k q^(E-k-1)
    let q = BigRational::one() - p;
    let mut p_pows = vec![BigRational::one(); e + 1];
    let mut q_pows = vec![BigRational::one(); e + 1];
    for i in 1..=e {
        p_pows[i] = &p_pows[i - 1] * p;
        q_pows[i] = &q_pows[i - 1] * &q;
    }
    let mut derivative = BigRational::zero();
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let c = BigRational::from_integer(c.into());
        if k > 0 {
            derivative += &c
                * BigRational::from_integer((k as u64).into())
                * &p_pows[k - 1]
                * &q_pows[e - k];
        }
        if e - k > 0 {
            derivative -= &c
                * BigRational::from_integer(((e - k) as u64).into())
                * &p_pows[k]
                * &q_pows[e - k - 1];
        }
    }

    // route 2: covariance sum / (p(1-p))
    let mut cov_sum = BigRational::zero();
    for acc in &efw {
        cov_sum += acc - &ef * p;
    }
    let denom = p * &q;
    let covariance_sum = if denom.is_zero() {
        // endpoints p in {0,1}: both sides of the identity degenerate;
        // report the derivative route only
        derivative.clone()
    } else {
        cov_sum / denom
    };

    let gap = rational_to_f64(&(&derivative - &covariance_sum)).abs();
    Ok(RussoCheck {
        derivative: rational_to_f64(&derivative),
        covariance_sum: rational_to_f64(&covariance_sum),
        gap,
        holds: gap < super::osss::EXACT_GAP_TOLERANCE,
    })
}

impl RussoCheck {
    pub fn report(&self, instance: &str) -> OracleReport {
        OracleReport {
            check: "russo".into(),
            instance: instance.into(),
            lhs: self.derivative,
            rhs: self.covariance_sum,
            gap: self.gap,
            holds: self.holds,
            notes: String::new(),
        }
    }
}
