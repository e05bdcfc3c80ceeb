//! Group models: the family tag, generating set, and element operations.

use std::sync::Arc;

use super::elem::{free_inv, free_mul, lamp_xor, letter_inverse, Elem};
use super::finite::FiniteTable;
use crate::error::{Error, Result};

/// A group model (or the oriented regular tree, which is handled as a
/// rooted vertex-set model rather than a group).
#[derive(Debug, Clone)]
pub enum GroupModel {
    /// Integer lattice `Z^d` with generators `±e_i`.
    Lattice { d: usize },
    /// Free group `F_k` with the `2k` single-letter generators.
    Free { k: usize },
    /// Finite group from a multiplication table.
    Finite(Arc<FiniteTable>),
    /// Restricted wreath product `Z2 ≀ base`, generated by the lifted base
    /// generators plus the lamp flip at the current position.
    Wreath { base: Box<GroupModel> },
    /// Oriented d-regular tree with a fixed end and level function; not a
    /// group. Exists for the level-set experiments and the tilted
    /// mass-transport check.
    OrientedTree { d: usize },
}

impl GroupModel {
    pub fn lattice(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("lattice dimension must be >= 1".into()));
        }
        Ok(GroupModel::Lattice { d })
    }

    pub fn free(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("free rank must be >= 1".into()));
        }
        Ok(GroupModel::Free { k })
    }

    pub fn wreath_z2(base: GroupModel) -> Result<Self> {
        if matches!(base, GroupModel::OrientedTree { .. }) {
            return Err(Error::UnsupportedFamily(
                "wreath base must be a group model".into(),
            ));
        }
        Ok(GroupModel::Wreath { base: Box::new(base) })
    }

    pub fn oriented_tree(d: usize) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidParameter(
                "oriented tree degree must be >= 3".into(),
            ));
        }
        Ok(GroupModel::OrientedTree { d })
    }

    /// Canonical DSL name.
    pub fn dsl_name(&self) -> String {
        match self {
            GroupModel::Lattice { d } => format!("lattice:{d}"),
            GroupModel::Free { k } => format!("free:{k}"),
            GroupModel::Finite(t) => format!("finite:{}", t.name),
            GroupModel::Wreath { base } => format!("wreath:z2:{}", base.dsl_name()),
            GroupModel::OrientedTree { d } => format!("tree-oriented:{d}"),
        }
    }

    pub fn is_group(&self) -> bool {
        !matches!(self, GroupModel::OrientedTree { .. })
    }

    /// True when the underlying graph is a tree, so connectivity between
    /// two vertices reduces to the unique geodesic being open.
    pub fn is_tree(&self) -> bool {
        matches!(
            self,
            GroupModel::Free { .. }
                | GroupModel::OrientedTree { .. }
                | GroupModel::Lattice { d: 1 }
        )
    }

    pub fn identity(&self) -> Elem {
        match self {
            GroupModel::Lattice { d } => Elem::Lattice(vec![0; *d]),
            GroupModel::Free { .. } => Elem::Free(Vec::new()),
            GroupModel::Finite(t) => Elem::Finite(t.identity),
            GroupModel::Wreath { base } => Elem::Wreath {
                lamps: Vec::new(),
                pos: Box::new(base.identity()),
            },
            GroupModel::OrientedTree { .. } => Elem::TreeNode { up: 0, down: Vec::new() },
        }
    }

    /// The symmetric generating set, in a fixed deterministic order.
    /// Asserted loop-free and duplicate-free at construction time of any
    /// ball, so the Cayley graph is simple.
    pub fn generators(&self) -> Result<Vec<Elem>> {
        match self {
            GroupModel::Lattice { d } => {
                let mut gens = Vec::with_capacity(2 * d);
                for i in 0..*d {
                    for sign in [1i64, -1] {
                        let mut v = vec![0i64; *d];
                        v[i] = sign;
                        gens.push(Elem::Lattice(v));
                    }
                }
                Ok(gens)
            }
            GroupModel::Free { k } => Ok((0..2 * *k as u8).map(|l| Elem::Free(vec![l])).collect()),
            GroupModel::Finite(t) => Ok(t.generators.iter().map(|&g| Elem::Finite(g)).collect()),
            GroupModel::Wreath { base } => {
                let mut gens: Vec<Elem> = base
                    .generators()?
                    .into_iter()
                    .map(|g| Elem::Wreath { lamps: Vec::new(), pos: Box::new(g) })
                    .collect();
                gens.push(Elem::Wreath {
                    lamps: vec![base.identity()],
                    pos: Box::new(base.identity()),
                });
                Ok(gens)
            }
            GroupModel::OrientedTree { .. } => Err(Error::UnsupportedFamily(
                "oriented tree has no generating set; use neighbors".into(),
            )),
        }
    }

    /// Canonical product of two elements.
    pub fn multiply(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        match (self, a, b) {
            (GroupModel::Lattice { d }, Elem::Lattice(x), Elem::Lattice(y)) => {
                if x.len() != *d || y.len() != *d {
                    return Err(Error::ModelMismatch("lattice dimension".into()));
                }
                Ok(Elem::Lattice(x.iter().zip(y).map(|(a, b)| a + b).collect()))
            }
            (GroupModel::Free { .. }, Elem::Free(u), Elem::Free(v)) => {
                Ok(Elem::Free(free_mul(u, v)))
            }
            (GroupModel::Finite(t), Elem::Finite(i), Elem::Finite(j)) => {
                if (*i as usize) >= t.order || (*j as usize) >= t.order {
                    return Err(Error::ModelMismatch("finite index".into()));
                }
                Ok(Elem::Finite(t.mul(*i, *j)))
            }
            (
                GroupModel::Wreath { base },
                Elem::Wreath { lamps: f, pos: x },
                Elem::Wreath { lamps: g, pos: y },
            ) => {
                // (f, x)(g, y) = (f xor x.g, x y)
                let mut shifted = Vec::with_capacity(g.len());
                for l in g {
                    shifted.push(base.multiply(x, l)?);
                }
                shifted.sort_unstable();
                Ok(Elem::Wreath {
                    lamps: lamp_xor(f, &shifted),
                    pos: Box::new(base.multiply(x, y)?),
                })
            }
            (GroupModel::OrientedTree { .. }, _, _) => Err(Error::UnsupportedFamily(
                "oriented tree vertices have no group law".into(),
            )),
            _ => Err(Error::ModelMismatch(format!(
                "{a:?} / {b:?} in {}",
                self.dsl_name()
            ))),
        }
    }

    pub fn invert(&self, a: &Elem) -> Result<Elem> {
        match (self, a) {
            (GroupModel::Lattice { .. }, Elem::Lattice(x)) => {
                Ok(Elem::Lattice(x.iter().map(|v| -v).collect()))
            }
            (GroupModel::Free { .. }, Elem::Free(w)) => Ok(Elem::Free(free_inv(w))),
            (GroupModel::Finite(t), Elem::Finite(i)) => Ok(Elem::Finite(t.inv[*i as usize])),
            (GroupModel::Wreath { base }, Elem::Wreath { lamps, pos }) => {
                let pinv = base.invert(pos)?;
                let mut shifted = Vec::with_capacity(lamps.len());
                for l in lamps {
                    shifted.push(base.multiply(&pinv, l)?);
                }
                shifted.sort_unstable();
                Ok(Elem::Wreath { lamps: shifted, pos: Box::new(pinv) })
            }
            _ => Err(Error::ModelMismatch("invert".into())),
        }
    }

    /// Validate an element and return its canonical form; rejects malformed
    /// encodings (unreduced words, unsorted or duplicated lamps, bad tree
    /// addresses).
    pub fn canonicalize(&self, a: &Elem) -> Result<Elem> {
        match (self, a) {
            (GroupModel::Lattice { d }, Elem::Lattice(x)) => {
                if x.len() != *d {
                    return Err(Error::MalformedElement("lattice dimension".into()));
                }
                Ok(a.clone())
            }
            (GroupModel::Free { k }, Elem::Free(w)) => {
                if w.iter().any(|&l| l as usize >= 2 * k) {
                    return Err(Error::MalformedElement("letter out of range".into()));
                }
                if w.windows(2).any(|p| p[1] == letter_inverse(p[0])) {
                    return Err(Error::MalformedElement("word not freely reduced".into()));
                }
                Ok(a.clone())
            }
            (GroupModel::Finite(t), Elem::Finite(i)) => {
                if (*i as usize) >= t.order {
                    return Err(Error::MalformedElement("finite index".into()));
                }
                Ok(a.clone())
            }
            (GroupModel::Wreath { base }, Elem::Wreath { lamps, pos }) => {
                if lamps.windows(2).any(|p| p[0] >= p[1]) {
                    return Err(Error::MalformedElement(
                        "lamp support not sorted/deduplicated".into(),
                    ));
                }
                for l in lamps {
                    base.canonicalize(l)?;
                }
                base.canonicalize(pos)?;
                Ok(a.clone())
            }
            (GroupModel::OrientedTree { d }, Elem::TreeNode { up, down }) => {
                if down.iter().any(|&c| c as usize >= d - 1) {
                    return Err(Error::MalformedElement("tree child out of range".into()));
                }
                if *up > 0 && down.first() == Some(&0) {
                    return Err(Error::MalformedElement(
                        "tree address not canonical (descends back along the up-path)".into(),
                    ));
                }
                Ok(a.clone())
            }
            _ => Err(Error::ModelMismatch("canonicalize".into())),
        }
    }

    /// Word-metric distance from the identity (root), when it has a closed
    /// form. `None` means the model needs a materialized ball for distances
    /// (finite tables, wreath products).
    pub fn dist_to_root(&self, a: &Elem) -> Option<u64> {
        match (self, a) {
            (GroupModel::Lattice { .. }, Elem::Lattice(x)) => {
                Some(x.iter().map(|v| v.unsigned_abs()).sum())
            }
            (GroupModel::Free { .. }, Elem::Free(w)) => Some(w.len() as u64),
            (GroupModel::OrientedTree { .. }, Elem::TreeNode { up, down }) => {
                Some(*up as u64 + down.len() as u64)
            }
            _ => None,
        }
    }

    /// Adjacent vertices, in a fixed deterministic order.
    pub fn neighbors(&self, a: &Elem) -> Result<Vec<Elem>> {
        match self {
            GroupModel::OrientedTree { d } => {
                let Elem::TreeNode { up, down } = a else {
                    return Err(Error::ModelMismatch("tree vertex".into()));
                };
                let mut out = Vec::with_capacity(*d);
                // parent (toward the fixed end)
                if down.is_empty() {
                    out.push(Elem::TreeNode { up: up + 1, down: Vec::new() });
                } else {
                    out.push(Elem::TreeNode {
                        up: *up,
                        down: down[..down.len() - 1].to_vec(),
                    });
                }
                // children, one level below
                if down.is_empty() && *up > 0 {
                    // child 0 is the next vertex down the up-path
                    out.push(Elem::TreeNode { up: up - 1, down: Vec::new() });
                    for c in 1..(*d as u8 - 1) {
                        out.push(Elem::TreeNode { up: *up, down: vec![c] });
                    }
                } else {
                    for c in 0..(*d as u8 - 1) {
                        let mut w = down.clone();
                        w.push(c);
                        out.push(Elem::TreeNode { up: *up, down: w });
                    }
                }
                Ok(out)
            }
            _ => {
                let gens = self.generators()?;
                gens.iter().map(|g| self.multiply(a, g)).collect()
            }
        }
    }

    /// Level function of the oriented tree: parents are one level above
    /// their children.
    pub fn tree_level(&self, a: &Elem) -> Result<i64> {
        match (self, a) {
            (GroupModel::OrientedTree { .. }, Elem::TreeNode { up, down }) => {
                Ok(*up as i64 - down.len() as i64)
            }
            _ => Err(Error::UnsupportedFamily("level requires the oriented tree".into())),
        }
    }

    /// Unique geodesic between two vertices of a tree model, including both
    /// endpoints. `None` for models whose graphs contain cycles.
    pub fn geodesic(&self, a: &Elem, b: &Elem) -> Result<Option<Vec<Elem>>> {
        match self {
            GroupModel::Free { .. } => {
                let (Elem::Free(u), Elem::Free(v)) = (a, b) else {
                    return Err(Error::ModelMismatch("free word".into()));
                };
                // walk back the common prefix of u, then forward along v
                let common = u.iter().zip(v.iter()).take_while(|(x, y)| x == y).count();
                let mut path = Vec::with_capacity(u.len() + v.len() - 2 * common + 1);
                for i in (common..=u.len()).rev() {
                    path.push(Elem::Free(u[..i].to_vec()));
                }
                for i in common + 1..=v.len() {
                    path.push(Elem::Free(v[..i].to_vec()));
                }
                Ok(Some(path))
            }
            GroupModel::Lattice { d: 1 } => {
                let (Elem::Lattice(u), Elem::Lattice(v)) = (a, b) else {
                    return Err(Error::ModelMismatch("lattice point".into()));
                };
                let (x, y) = (u[0], v[0]);
                let step = if y >= x { 1 } else { -1 };
                let mut path = Vec::new();
                let mut c = x;
                loop {
                    path.push(Elem::Lattice(vec![c]));
                    if c == y {
                        break;
                    }
                    c += step;
                }
                Ok(Some(path))
            }
            GroupModel::OrientedTree { .. } => {
                let (Elem::TreeNode { up: a1, down: w1 }, Elem::TreeNode { up: a2, down: w2 }) =
                    (a, b)
                else {
                    return Err(Error::ModelMismatch("tree vertex".into()));
                };
                // meet point: common prefix when the up-counts agree,
                // otherwise the higher ancestor
                let (meet_up, meet_len) = if a1 == a2 {
                    let c = w1.iter().zip(w2.iter()).take_while(|(x, y)| x == y).count();
                    (*a1, c)
                } else {
                    (*a1.max(a2), 0)
                };
                let mut path = Vec::new();
                // climb from a to the meet
                let mut cur_up = *a1;
                let mut cur = w1.clone();
                loop {
                    path.push(Elem::TreeNode { up: cur_up, down: cur.clone() });
                    if cur_up == meet_up && cur.len() == meet_len {
                        break;
                    }
                    if cur.is_empty() {
                        cur_up += 1;
                    } else {
                        cur.pop();
                    }
                }
                // descend to b: first down the up-chain, then along w2
                let mut cur_up = meet_up;
                while cur_up > *a2 {
                    cur_up -= 1;
                    path.push(Elem::TreeNode { up: cur_up, down: Vec::new() });
                }
                for i in meet_len + 1..=w2.len() {
                    path.push(Elem::TreeNode { up: *a2, down: w2[..i].to_vec() });
                }
                Ok(Some(path))
            }
            _ => Ok(None),
        }
    }
}
