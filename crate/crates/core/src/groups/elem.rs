//! Canonical normal forms for group elements and oriented-tree vertices.

/// A group element (or oriented-tree vertex) in canonical normal form.
///
/// The encoding is the vertex identity everywhere: equality, hashing, edge
/// keys, and deterministic orderings all go through the normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    /// Point of the integer lattice `Z^d`.
    Lattice(Vec<i64>),
    /// Freely reduced word over `2k` letters; letter `2i` is generator `i`,
    /// letter `2i+1` its inverse.
    Free(Vec<u8>),
    /// Index into a finite group's multiplication table.
    Finite(u16),
    /// Restricted wreath product `Z2 ≀ base`: the finitely supported lamp
    /// set (sorted, on-lamps only) plus the position in the base group.
    Wreath { lamps: Vec<Elem>, pos: Box<Elem> },
    /// Vertex of the oriented d-regular tree: `up` steps toward the fixed
    /// end, then a word of child choices back down. Canonical form requires
    /// `down[0] != 0` whenever `up > 0` and `down` is nonempty (child 0 of
    /// each ancestor is the one leading back toward the root).
    TreeNode { up: u32, down: Vec<u8> },
}

impl Elem {
    /// Stable byte encoding; injective per model family. Lattice
    /// coordinates are offset-encoded so byte order equals numeric order.
    pub fn encode_into(&self, out: &mut Vec<u8>) {
        match self {
            Elem::Lattice(v) => {
                out.push(1);
                out.extend_from_slice(&(v.len() as u32).to_be_bytes());
                for &x in v {
                    out.extend_from_slice(&((x as u64) ^ (1u64 << 63)).to_be_bytes());
                }
            }
            Elem::Free(w) => {
                out.push(2);
                out.extend_from_slice(&(w.len() as u32).to_be_bytes());
                out.extend_from_slice(w);
            }
            Elem::Finite(i) => {
                out.push(3);
                out.extend_from_slice(&i.to_be_bytes());
            }
            Elem::Wreath { lamps, pos } => {
                out.push(4);
                out.extend_from_slice(&(lamps.len() as u32).to_be_bytes());
                for l in lamps {
                    let mut inner = Vec::new();
                    l.encode_into(&mut inner);
                    out.extend_from_slice(&(inner.len() as u32).to_be_bytes());
                    out.extend_from_slice(&inner);
                }
                pos.encode_into(out);
            }
            Elem::TreeNode { up, down } => {
                out.push(5);
                out.extend_from_slice(&up.to_be_bytes());
                out.extend_from_slice(&(down.len() as u32).to_be_bytes());
                out.extend_from_slice(down);
            }
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16);
        self.encode_into(&mut out);
        out
    }

    /// Short display form used in diagnostics and DSL round-trips.
    pub fn display(&self) -> String {
        match self {
            Elem::Lattice(v) => v
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            Elem::Free(w) => {
                if w.is_empty() {
                    "e".to_string()
                } else {
                    w.iter().map(|&l| letter_name(l)).collect()
                }
            }
            Elem::Finite(i) => format!("#{i}"),
            Elem::Wreath { lamps, pos } => {
                let ls = lamps
                    .iter()
                    .map(|l| l.display())
                    .collect::<Vec<_>>()
                    .join("+");
                format!("({ls};{})", pos.display())
            }
            Elem::TreeNode { up, down } => {
                let w = down
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join("");
                format!("u{up}d{w}")
            }
        }
    }
}

/// Free-group letter names: a, b, c, ... for generators, A, B, C, ... for
/// inverses.
pub fn letter_name(letter: u8) -> char {
    let base = if letter.is_multiple_of(2) { b'a' } else { b'A' };
    (base + letter / 2) as char
}

/// Inverse of a free-group letter.
#[inline]
pub fn letter_inverse(letter: u8) -> u8 {
    letter ^ 1
}

/// Concatenate-and-reduce for freely reduced words.
pub fn free_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    for &l in b {
        if out.last() == Some(&letter_inverse(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn free_inv(a: &[u8]) -> Vec<u8> {
    a.iter().rev().map(|&l| letter_inverse(l)).collect()
}

/// Symmetric difference of two sorted lamp supports.
pub fn lamp_xor(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
