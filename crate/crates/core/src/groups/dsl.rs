//! Config-string parsing for group models, subgroups, and elements.
//!
//! Group DSL: `lattice:d`, `free:k`, `wreath:z2:<base>`, `tree-oriented:d`,
//! `finite:<name>` (built-in tables: s3, d4).
//!
//! Subgroup DSL: `all`, `lamp`, `lamp:r` (flip truncation radius r),
//! `axis:i`, `level:n` (oriented tree), `coset:<element>:<subgroup>`.

use super::elem::Elem;
use super::finite;
use super::model::GroupModel;
use super::subgroup::SubgroupSpec;
use crate::error::{Error, Result};

pub const DEFAULT_LAMP_TRUNCATION: u32 = 2;

pub fn parse_group(s: &str) -> Result<GroupModel> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["lattice", d] => GroupModel::lattice(parse_num(d, s)?),
        ["free", k] => GroupModel::free(parse_num(k, s)?),
        ["tree-oriented", d] => GroupModel::oriented_tree(parse_num(d, s)?),
        ["finite", name] => finite::builtin(name)
            .map(GroupModel::Finite)
            .ok_or_else(|| Error::BadGroupDsl(format!("unknown finite table `{name}`"))),
        ["wreath", "z2", rest @ ..] if !rest.is_empty() => {
            let base = parse_group(&rest.join(":"))?;
            GroupModel::wreath_z2(base)
        }
        _ => Err(Error::BadGroupDsl(s.to_string())),
    }
}

pub fn parse_subgroup(s: &str, model: &GroupModel) -> Result<SubgroupSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["all"] => SubgroupSpec::all(model),
        ["lamp"] => SubgroupSpec::lamp(model, DEFAULT_LAMP_TRUNCATION),
        ["lamp", r] => SubgroupSpec::lamp(model, parse_num(r, s)? as u32),
        ["axis", i] => SubgroupSpec::axis(model, parse_num(i, s)?),
        ["level", n] => {
            let n: i64 = n
                .parse()
                .map_err(|_| Error::BadSubgroupDsl(s.to_string()))?;
            SubgroupSpec::level(model, n)
        }
        ["coset", elem, rest @ ..] if !rest.is_empty() => {
            let inner = parse_subgroup(&rest.join(":"), model)?;
            let rep = parse_element(elem, model)?;
            SubgroupSpec::coset(model, rep, inner)
        }
        _ => Err(Error::BadSubgroupDsl(s.to_string())),
    }
}

/// Element literals: lattice `1,0,-2`; free group words over `a..z` with
/// uppercase inverses (`e` is not a letter: use the empty string or `1` for
/// the identity); finite group element names; wreath `pos=<base word>`.
pub fn parse_element(s: &str, model: &GroupModel) -> Result<Elem> {
    let elem = match model {
        GroupModel::Lattice { d } => {
            let coords: std::result::Result<Vec<i64>, _> =
                s.split(',').map(|c| c.trim().parse::<i64>()).collect();
            let coords = coords.map_err(|_| Error::MalformedElement(s.to_string()))?;
            if coords.len() != *d {
                return Err(Error::MalformedElement(format!(
                    "expected {d} coordinates in `{s}`"
                )));
            }
            Elem::Lattice(coords)
        }
        GroupModel::Free { .. } => {
            if s.is_empty() || s == "1" {
                model.identity()
            } else {
                let mut word = model.identity();
                for ch in s.chars() {
                    let letter = char_to_letter(ch).ok_or_else(|| {
                        Error::MalformedElement(format!("bad letter `{ch}` in `{s}`"))
                    })?;
                    word = model.multiply(&word, &Elem::Free(vec![letter]))?;
                }
                word
            }
        }
        GroupModel::Finite(t) => {
            let idx = t
                .element_names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::MalformedElement(format!("unknown element `{s}`")))?;
            Elem::Finite(idx as u16)
        }
        GroupModel::Wreath { base } => {
            let rest = s
                .strip_prefix("pos=")
                .ok_or_else(|| Error::MalformedElement(format!("expected pos=<word> in `{s}`")))?;
            let pos = parse_element(rest, base)?;
            Elem::Wreath { lamps: Vec::new(), pos: Box::new(pos) }
        }
        GroupModel::OrientedTree { .. } => {
            return Err(Error::UnsupportedFamily(
                "tree vertices cannot be coset representatives".into(),
            ))
        }
    };
    model.canonicalize(&elem)?;
    Ok(elem)
}

fn char_to_letter(ch: char) -> Option<u8> {
    if ch.is_ascii_lowercase() {
        Some(2 * (ch as u8 - b'a'))
    } else if ch.is_ascii_uppercase() {
        Some(2 * (ch as u8 - b'A') + 1)
    } else {
        None
    }
}

fn parse_num(s: &str, whole: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::BadGroupDsl(whole.to_string()))
}

/// The group DSL strings with built-in support, for `list-groups`.
pub fn known_groups() -> Vec<(&'static str, &'static str)> {
    vec![
        ("lattice:<d>", "integer lattice Z^d, generators ±e_i"),
        ("free:<k>", "free group F_k, 2k single-letter generators"),
        ("finite:s3", "symmetric group S3, transposition generators"),
        ("finite:d4", "dihedral group D4, rotation + reflection"),
        ("wreath:z2:<base>", "lamplighter Z2 wr base (e.g. wreath:z2:free:2)"),
        ("tree-oriented:<d>", "oriented d-regular tree with level function"),
    ]
}

pub fn known_subgroups() -> Vec<(&'static str, &'static str)> {
    vec![
        ("all", "the whole group"),
        ("lamp[:r]", "lamp subgroup of a wreath product; flips within radius r (default 2)"),
        ("axis:<i>", "i-th coordinate axis of a lattice"),
        ("level:<n>", "level set L_n of the oriented tree"),
        ("coset:<element>:<subgroup>", "left coset of a subgroup"),
    ]
}
