//! Distinguished vertex sets: subgroups, their cosets, and tree level sets.

use super::elem::Elem;
use super::model::GroupModel;
use crate::error::{Error, Result};

/// How membership in the distinguished set is decided.
#[derive(Debug, Clone)]
pub enum MembershipRule {
    /// The whole group.
    All,
    /// Lamp subgroup of a wreath product: elements `(f, e)` with the base
    /// position at the identity.
    Lamp,
    /// Coordinate axis `Z e_i` of a lattice.
    Axis(usize),
    /// Level set `L_n` of the oriented tree.
    Level(i64),
    /// Left coset `rep * inner`.
    Coset { rep: Box<Elem>, inner: Box<MembershipRule> },
}

/// A distinguished vertex set with enough structure to run a random walk on
/// it: a membership predicate plus a generating set for its own word metric
/// and step distribution.
#[derive(Debug, Clone)]
pub struct SubgroupSpec {
    pub label: String,
    pub rule: MembershipRule,
    /// Generators of the subgroup (symmetric). Empty for sets that are not
    /// subgroups (cosets, tree levels); walks on those are rejected.
    pub generators: Vec<Elem>,
}

impl MembershipRule {
    pub fn matches(&self, model: &GroupModel, elem: &Elem) -> Result<bool> {
        match self {
            MembershipRule::All => Ok(true),
            MembershipRule::Lamp => match elem {
                Elem::Wreath { pos, .. } => {
                    let GroupModel::Wreath { base } = model else {
                        return Err(Error::ModelMismatch("lamp membership".into()));
                    };
                    Ok(**pos == base.identity())
                }
                _ => Err(Error::ModelMismatch("lamp membership".into())),
            },
            MembershipRule::Axis(i) => match elem {
                Elem::Lattice(v) => {
                    if *i >= v.len() {
                        return Err(Error::InvalidParameter(format!(
                            "axis {i} out of range for dimension {}",
                            v.len()
                        )));
                    }
                    Ok(v.iter().enumerate().all(|(j, &x)| j == *i || x == 0))
                }
                _ => Err(Error::ModelMismatch("axis membership".into())),
            },
            MembershipRule::Level(n) => Ok(model.tree_level(elem)? == *n),
            MembershipRule::Coset { rep, inner } => {
                let rep_inv = model.invert(rep)?;
                let shifted = model.multiply(&rep_inv, elem)?;
                inner.matches(model, &shifted)
            }
        }
    }
}

impl SubgroupSpec {
    /// The whole group, walked with the ambient generators.
    pub fn all(model: &GroupModel) -> Result<Self> {
        Ok(SubgroupSpec {
            label: "all".into(),
            rule: MembershipRule::All,
            generators: if model.is_group() { model.generators()? } else { Vec::new() },
        })
    }

    /// Lamp subgroup of a wreath product. Its natural generating set (one
    /// flip per base element) is infinite; the walk uses the flips at base
    /// positions within `truncation` of the base identity.
    pub fn lamp(model: &GroupModel, truncation: u32) -> Result<Self> {
        let GroupModel::Wreath { base } = model else {
            return Err(Error::IncompatibleSubgroup {
                subgroup: "lamp".into(),
                group: model.dsl_name(),
            });
        };
        // flips at base-ball positions, enumerated breadth-first
        let mut frontier = vec![base.identity()];
        let mut seen: std::collections::BTreeSet<Elem> = frontier.iter().cloned().collect();
        for _ in 0..truncation {
            let mut next = Vec::new();
            for v in &frontier {
                for n in base.neighbors(v)? {
                    if seen.insert(n.clone()) {
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        let generators = seen
            .into_iter()
            .map(|pos| Elem::Wreath { lamps: vec![pos], pos: Box::new(base.identity()) })
            .collect();
        Ok(SubgroupSpec {
            label: "lamp".into(),
            rule: MembershipRule::Lamp,
            generators,
        })
    }

    pub fn axis(model: &GroupModel, i: usize) -> Result<Self> {
        let GroupModel::Lattice { d } = model else {
            return Err(Error::IncompatibleSubgroup {
                subgroup: format!("axis:{i}"),
                group: model.dsl_name(),
            });
        };
        if i >= *d {
            return Err(Error::InvalidParameter(format!(
                "axis {i} out of range for lattice:{d}"
            )));
        }
        let mut pos = vec![0i64; *d];
        pos[i] = 1;
        let mut neg = vec![0i64; *d];
        neg[i] = -1;
        Ok(SubgroupSpec {
            label: format!("axis:{i}"),
            rule: MembershipRule::Axis(i),
            generators: vec![Elem::Lattice(pos), Elem::Lattice(neg)],
        })
    }

    pub fn level(model: &GroupModel, n: i64) -> Result<Self> {
        if !matches!(model, GroupModel::OrientedTree { .. }) {
            return Err(Error::IncompatibleSubgroup {
                subgroup: format!("level:{n}"),
                group: model.dsl_name(),
            });
        }
        Ok(SubgroupSpec {
            label: format!("level:{n}"),
            rule: MembershipRule::Level(n),
            generators: Vec::new(),
        })
    }

    pub fn coset(model: &GroupModel, rep: Elem, inner: SubgroupSpec) -> Result<Self> {
        model.canonicalize(&rep)?;
        Ok(SubgroupSpec {
            label: format!("coset:{}:{}", rep.display(), inner.label),
            rule: MembershipRule::Coset {
                rep: Box::new(rep),
                inner: Box::new(inner.rule),
            },
            generators: Vec::new(),
        })
    }

    pub fn matches(&self, model: &GroupModel, elem: &Elem) -> Result<bool> {
        self.rule.matches(model, elem)
    }

    /// Spot-check the subgroup invariants: the identity is a member and
    /// members are closed under the listed generators.
    pub fn spot_check(&self, model: &GroupModel, samples: usize) -> Result<()> {
        let e = model.identity();
        if !self.matches(model, &e)? {
            return Err(Error::InvalidParameter(format!(
                "subgroup {} does not contain the identity",
                self.label
            )));
        }
        if self.generators.is_empty() {
            return Ok(());
        }
        let mut x = e;
        for i in 0..samples {
            let g = &self.generators[i % self.generators.len()];
            x = model.multiply(&x, g)?;
            if !self.matches(model, &x)? {
                return Err(Error::InvalidParameter(format!(
                    "subgroup {} not closed under its generators",
                    self.label
                )));
            }
        }
        Ok(())
    }
}
