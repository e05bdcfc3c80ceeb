//! Multiplication tables for the built-in finite groups.

use std::sync::Arc;

/// A finite group given by its full multiplication table.
#[derive(Debug)]
pub struct FiniteTable {
    pub name: String,
    pub order: usize,
    /// `mul[i * order + j]` is the index of the product `g_i * g_j`.
    pub mul: Vec<u16>,
    pub inv: Vec<u16>,
    /// Indices of the generating set (symmetric, identity-free).
    pub generators: Vec<u16>,
    pub element_names: Vec<String>,
    pub identity: u16,
}

impl FiniteTable {
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order + b as usize]
    }

    /// Build a table from explicit permutation representations. Element 0
    /// must be the identity permutation.
    fn from_permutations(
        name: &str,
        perms: Vec<Vec<u8>>,
        names: Vec<String>,
        generator_names: &[&str],
    ) -> Arc<FiniteTable> {
        let order = perms.len();
        let index_of = |p: &[u8]| perms.iter().position(|q| q[..] == *p).unwrap() as u16;
        let mut mul = vec![0u16; order * order];
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                // (a*b)(x) = a(b(x))
                let prod: Vec<u8> = (0..a.len()).map(|x| a[b[x] as usize]).collect();
                mul[i * order + j] = index_of(&prod);
            }
        }
        let mut inv = vec![0u16; order];
        for i in 0..order {
            for j in 0..order {
                if mul[i * order + j] == 0 {
                    inv[i] = j as u16;
                }
            }
        }
        let mut generators: Vec<u16> = generator_names
            .iter()
            .map(|g| names.iter().position(|n| n == g).unwrap() as u16)
            .collect();
        // close under inverses, drop duplicates
        let mut sym = generators.clone();
        for &g in &generators {
            sym.push(inv[g as usize]);
        }
        sym.sort_unstable();
        sym.dedup();
        generators = sym;
        Arc::new(FiniteTable {
            name: name.to_string(),
            order,
            mul,
            inv,
            generators,
            element_names: names,
            identity: 0,
        })
    }
}

/// Symmetric group S3 generated by all three transpositions; the Cayley
/// graph is 3-regular on 6 vertices (9 edges).
pub fn s3() -> Arc<FiniteTable> {
    let perms: Vec<Vec<u8>> = vec![
        vec![0, 1, 2], // e
        vec![1, 0, 2], // (01)
        vec![0, 2, 1], // (12)
        vec![2, 1, 0], // (02)
        vec![1, 2, 0], // (012): 0->1, 1->2, 2->0
        vec![2, 0, 1], // (021)
    ];
    let names = vec!["e", "t01", "t12", "t02", "c3", "c3i"]
        .into_iter()
        .map(String::from)
        .collect();
    FiniteTable::from_permutations("s3", perms, names, &["t01", "t12", "t02"])
}

/// Dihedral group D4 (symmetries of the square, order 8) generated by the
/// quarter rotation and one reflection; 3-regular on 8 vertices (12 edges).
pub fn d4() -> Arc<FiniteTable> {
    // permutations of the square's corners 0..4
    let r = [1u8, 2, 3, 0]; // rotation by 90 degrees
    let s = [1u8, 0, 3, 2]; // reflection swapping 0<->1 and 2<->3
    let compose = |a: &[u8], b: &[u8]| -> Vec<u8> { (0..4).map(|x| a[b[x] as usize]).collect() };
    let e = vec![0u8, 1, 2, 3];
    let r1 = r.to_vec();
    let r2 = compose(&r1, &r1);
    let r3 = compose(&r2, &r1);
    let s0 = s.to_vec();
    let sr1 = compose(&s0, &r1);
    let sr2 = compose(&s0, &r2);
    let sr3 = compose(&s0, &r3);
    let perms = vec![e, r1, r2, r3, s0, sr1, sr2, sr3];
    let names = vec!["e", "r1", "r2", "r3", "s", "sr1", "sr2", "sr3"]
        .into_iter()
        .map(String::from)
        .collect();
    FiniteTable::from_permutations("d4", perms, names, &["r1", "s"])
}

/// Look up a built-in table by name.
pub fn builtin(name: &str) -> Option<Arc<FiniteTable>> {
    match name {
        "s3" => Some(s3()),
        "d4" => Some(d4()),
        _ => None,
    }
}
