//! Exact verification of the coset tail comparison on finite Cayley
//! graphs: `P(|K_o ∩ γH| >= n) + P(|K_o ∩ Hγ^-1| >= n) <= 2 P(|K_o ∩ H| >= n)`.

use num_rational::BigRational;
use num_traits::Zero;

use super::report::OracleReport;
use super::system::{enumerate_rational, rational_to_f64, FiniteSystem};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct KghCheck {
    /// `P(|K_o ∩ γH| >= n)`.
    pub left_coset_tail: f64,
    /// `P(|K_o ∩ Hγ^-1| >= n)`.
    pub right_coset_tail: f64,
    /// `P(|K_o ∩ H| >= n)`.
    pub subgroup_tail: f64,
    pub gap: f64,
    pub holds: bool,
}

/// Closure of a generating subset inside a finite group.
pub fn generated_subgroup(sys: &FiniteSystem, generators: &[u16]) -> Result<Vec<usize>> {
    let table = sys
        .group
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("system has no group structure".into()))?;
    let mut members = vec![false; table.order];
    members[table.identity as usize] = true;
    let mut frontier = vec![table.identity];
    while let Some(g) = frontier.pop() {
        for &s in generators {
            for h in [table.mul(g, s), table.mul(s, g)] {
                if !members[h as usize] {
                    members[h as usize] = true;
                    frontier.push(h);
                }
            }
        }
    }
    Ok((0..table.order).filter(|&i| members[i]).collect())
}

/// Exact enumeration over all configurations of the Cayley graph; the
/// verdict is an exact rational comparison.
pub fn kgh_identity_check(
    sys: &FiniteSystem,
    subgroup: &[usize],
    gamma: usize,
    n: u64,
    p: &BigRational,
) -> Result<KghCheck> {
    let table = sys
        .group
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("system has no group structure".into()))?;
    if gamma >= table.order {
        return Err(Error::InvalidParameter("gamma out of range".into()));
    }
    let gamma_inv = table.inv[gamma] as usize;
    let left_coset: Vec<usize> = subgroup
        .iter()
        .map(|&h| table.mul(gamma as u16, h as u16) as usize)
        .collect();
    let right_coset: Vec<usize> = subgroup
        .iter()
        .map(|&h| table.mul(h as u16, gamma_inv as u16) as usize)
        .collect();

    let root = sys.root;
    let mut lhs1 = BigRational::zero();
    let mut lhs2 = BigRational::zero();
    let mut rhs = BigRational::zero();
    enumerate_rational(sys, p, |mask, w| {
        let comp = sys.components(mask);
        if sys.cluster_count_in(&comp, root, &left_coset) >= n {
            lhs1 += w;
        }
        if sys.cluster_count_in(&comp, root, &right_coset) >= n {
            lhs2 += w;
        }
        if sys.cluster_count_in(&comp, root, subgroup) >= n {
            rhs += w;
        }
    });

    let two = BigRational::from_integer(2.into());
    let slack = &two * &rhs - (&lhs1 + &lhs2);
    Ok(KghCheck {
        left_coset_tail: rational_to_f64(&lhs1),
        right_coset_tail: rational_to_f64(&lhs2),
        subgroup_tail: rational_to_f64(&rhs),
        gap: rational_to_f64(&slack),
        holds: slack >= BigRational::zero(),
    })
}

impl KghCheck {
    pub fn report(&self, instance: &str) -> OracleReport {
        OracleReport {
            check: "kgh".into(),
            instance: instance.into(),
            lhs: self.left_coset_tail + self.right_coset_tail,
            rhs: 2.0 * self.subgroup_tail,
            gap: self.gap,
            holds: self.holds,
            notes: String::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::finite::{d4, s3};
    use crate::oracles::system::big_rational;

    #[test]
    fn identity_gamma_is_an_equality() {
        let sys = FiniteSystem::cayley(s3(), vec![0]).unwrap();
        let a3 = generated_subgroup(&sys, &[4]).unwrap(); // generated by the 3-cycle
        assert_eq!(a3.len(), 3);
        let check = kgh_identity_check(&sys, &a3, 0, 2, &big_rational(1, 2)).unwrap();
        assert!(check.holds);
        assert!(check.gap.abs() < 1e-14, "gamma = e must give equality");
    }

    #[test]
    fn s3_transposition_coset() {
        let sys = FiniteSystem::cayley(s3(), vec![0]).unwrap();
        let a3 = generated_subgroup(&sys, &[4]).unwrap();
        // gamma = a transposition (index 1 = t01)
        let check = kgh_identity_check(&sys, &a3, 1, 2, &big_rational(1, 2)).unwrap();
        assert!(check.holds, "{check:?}");
    }

    #[test]
    fn d4_rotation_subgroup() {
        let sys = FiniteSystem::cayley(d4(), vec![0]).unwrap();
        let rot = generated_subgroup(&sys, &[1]).unwrap();
        assert_eq!(rot.len(), 4);
        // gamma = the reflection (index 4)
        for n in [1u64, 2, 4] {
            let check = kgh_identity_check(&sys, &rot, 4, n, &big_rational(1, 2)).unwrap();
            assert!(check.holds, "n = {n}: {check:?}");
        }
    }

    #[test]
    fn n_above_subgroup_size_gives_zero() {
        let sys = FiniteSystem::cayley(s3(), vec![0]).unwrap();
        let a3 = generated_subgroup(&sys, &[4]).unwrap();
        let check = kgh_identity_check(&sys, &a3, 1, 4, &big_rational(1, 2)).unwrap();
        assert_eq!(check.subgroup_tail, 0.0);
        assert_eq!(check.left_coset_tail, 0.0);
        assert!(check.holds);
    }
}
