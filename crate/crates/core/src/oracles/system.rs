//! Small systems for exact enumeration: a graph of at most 20 edges, a
//! distinguished vertex set, and optionally a finite-group Cayley
//! structure. Every configuration fits a direct sweep.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::finite::FiniteTable;
use crate::stats::Kahan;

pub const MAX_ENUM_EDGES: usize = 20;

#[derive(Debug, Clone)]
pub struct FiniteSystem {
    pub name: String,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    /// Distinguished vertex set, sorted.
    pub a_set: Vec<usize>,
    pub root: usize,
    /// Cayley structure when the vertices are the elements of a finite
    /// group (vertex i = element i).
    pub group: Option<Arc<FiniteTable>>,
    /// Vertex permutations the mass-transport kernels are checked against.
    pub automorphisms: Vec<Vec<usize>>,
}

impl FiniteSystem {
    pub fn new(
        name: &str,
        n: usize,
        edges: Vec<(usize, usize)>,
        a_set: Vec<usize>,
        root: usize,
    ) -> Result<FiniteSystem> {
        if edges.len() > MAX_ENUM_EDGES {
            return Err(Error::SystemTooLarge { edges: edges.len() });
        }
        let mut a_set = a_set;
        a_set.sort_unstable();
        a_set.dedup();
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidParameter(format!("bad edge ({u},{v})")));
            }
        }
        if a_set.iter().any(|&a| a >= n) || root >= n {
            return Err(Error::InvalidParameter("vertex out of range".into()));
        }
        Ok(FiniteSystem {
            name: name.to_string(),
            n,
            edges,
            a_set,
            root,
            group: None,
            automorphisms: Vec::new(),
        })
    }

    /// Cayley graph of a finite group: vertices are elements, edges join
    /// `g` to `g s` for the table's generators.
    pub fn cayley(table: Arc<FiniteTable>, a_set: Vec<usize>) -> Result<FiniteSystem> {
        let n = table.order;
        let mut edges = Vec::new();
        for g in 0..n as u16 {
            for &s in &table.generators {
                let h = table.mul(g, s);
                let (a, b) = (g.min(h) as usize, g.max(h) as usize);
                if a != b && !edges.contains(&(a, b)) {
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        let mut sys = FiniteSystem::new(&format!("cayley-{}", table.name), n, edges, a_set, 0)?;
        sys.group = Some(table);
        Ok(sys)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn config_count(&self) -> u64 {
        1u64 << self.edges.len()
    }

    /// Register a vertex permutation after verifying it is a graph
    /// automorphism fixing the distinguished set.
    pub fn add_automorphism(&mut self, perm: Vec<usize>) -> Result<()> {
        if perm.len() != self.n {
            return Err(Error::InvalidParameter("permutation length".into()));
        }
        for &(u, v) in &self.edges {
            let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
            if !self.edges.iter().any(|&(x, y)| (x, y) == (a, b)) {
                return Err(Error::InvalidParameter(
                    "permutation is not a graph automorphism".into(),
                ));
            }
        }
        let mut image: Vec<usize> = self.a_set.iter().map(|&a| perm[a]).collect();
        image.sort_unstable();
        if image != self.a_set {
            return Err(Error::InvalidParameter(
                "automorphism must fix the distinguished set".into(),
            ));
        }
        self.automorphisms.push(perm);
        Ok(())
    }

    /// Edge index permutation induced by a vertex automorphism.
    pub fn edge_permutation(&self, perm: &[usize]) -> Vec<usize> {
        self.edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                self.edges.iter().position(|&(x, y)| (x, y) == (a, b)).unwrap()
            })
            .collect()
    }

    /// Apply an edge permutation to a configuration mask.
    pub fn permute_mask(&self, edge_perm: &[usize], mask: u32) -> u32 {
        let mut out = 0u32;
        for (e, &pe) in edge_perm.iter().enumerate() {
            if (mask >> e) & 1 == 1 {
                out |= 1 << pe;
            }
        }
        out
    }

    /// Connected components of the open subgraph: component id per vertex.
    pub fn components(&self, mask: u32) -> Vec<u8> {
        let mut comp = vec![u8::MAX; self.n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut next = 0u8;
        for start in 0..self.n {
            if comp[start] != u8::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = next;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if comp[w] == u8::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// `|K_x ∩ S|` for the component of `x` under `comp`.
    pub fn cluster_count_in(&self, comp: &[u8], x: usize, set: &[usize]) -> u64 {
        let c = comp[x];
        set.iter().filter(|&&v| comp[v] == c).count() as u64
    }
}

/// Exact-rational weights `p^k (1-p)^(E-k)` for a full sweep.
pub struct RationalWeights {
    by_open_count: Vec<BigRational>,
}

impl RationalWeights {
    pub fn new(edge_count: usize, p: &BigRational) -> RationalWeights {
        let q = BigRational::one() - p;
        let mut by_open_count = Vec::with_capacity(edge_count + 1);
        for k in 0..=edge_count {
            let mut w = BigRational::one();
            for _ in 0..k {
                w *= p;
            }
            for _ in 0..(edge_count - k) {
                w *= &q;
            }
            by_open_count.push(w);
        }
        RationalWeights { by_open_count }
    }

    #[inline]
    pub fn of(&self, mask: u32) -> &BigRational {
        &self.by_open_count[mask.count_ones() as usize]
    }
}

/// Sweep all configurations with exact rational weights.
pub fn enumerate_rational(
    sys: &FiniteSystem,
    p: &BigRational,
    mut f: impl FnMut(u32, &BigRational),
) {
    let weights = RationalWeights::new(sys.edge_count(), p);
    for mask in 0..sys.config_count() as u32 {
        f(mask, weights.of(mask));
    }
}

/// Sweep all configurations with f64 weights (for irrational parameters);
/// pair with [`Kahan`] accumulators.
pub fn enumerate_float(sys: &FiniteSystem, p: f64, mut f: impl FnMut(u32, f64)) {
    let e = sys.edge_count();
    let mut pow_open = vec![1.0f64; e + 1];
    let mut pow_closed = vec![1.0f64; e + 1];
    for k in 1..=e {
        pow_open[k] = pow_open[k - 1] * p;
        pow_closed[k] = pow_closed[k - 1] * (1.0 - p);
    }
    for mask in 0..sys.config_count() as u32 {
        let k = mask.count_ones() as usize;
        f(mask, pow_open[k] * pow_closed[e - k]);
    }
}

/// Exact `Q_p(m) = max_u P(|K_u ∩ A| >= m)` for `m = 1..=n`, by one float
/// sweep with compensated accumulation.
pub fn exact_q_curve(sys: &FiniteSystem, p: f64, n: u64) -> Vec<f64> {
    let mut acc = vec![vec![Kahan::default(); n as usize + 1]; sys.n];
    enumerate_float(sys, p, |mask, w| {
        let comp = sys.components(mask);
        for (u, row) in acc.iter_mut().enumerate() {
            let c = sys.cluster_count_in(&comp, u, &sys.a_set);
            for m in 1..=(c.min(n)) {
                row[m as usize].add(w);
            }
        }
    });
    (1..=n as usize)
        .map(|m| {
            (0..sys.n)
                .map(|u| acc[u][m].total())
                .fold(0.0f64, f64::max)
        })
        .collect()
}

pub fn big_rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    let num = x.numer();
    let den = x.denom();
    // simple and sufficient for the magnitudes seen here
    let nf = num.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = den.to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

pub fn is_zero(x: &BigRational) -> bool {
    x.is_zero()
}

// ---- builders ----

pub fn single_edge() -> FiniteSystem {
    FiniteSystem::new("single-edge", 2, vec![(0, 1)], vec![0, 1], 0).unwrap()
}

pub fn path(n: usize) -> FiniteSystem {
    let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
    FiniteSystem::new(&format!("path-{n}"), n, edges, (0..n).collect(), 0).unwrap()
}

pub fn cycle(n: usize) -> FiniteSystem {
    let edges = (0..n).map(|i| (i, (i + 1) % n)).map(|(a, b)| (a.min(b), a.max(b))).collect();
    FiniteSystem::new(&format!("cycle-{n}"), n, edges, (0..n).collect(), 0).unwrap()
}

pub fn triangle() -> FiniteSystem {
    FiniteSystem::new("triangle", 3, vec![(0, 1), (0, 2), (1, 2)], vec![0, 1, 2], 0).unwrap()
}

/// Asymmetric 5-vertex tree: star at 1 with a pendant path.
pub fn asymmetric_tree5() -> FiniteSystem {
    FiniteSystem::new(
        "tree-5",
        5,
        vec![(0, 1), (1, 2), (1, 3), (3, 4)],
        vec![0, 1, 2, 3, 4],
        0,
    )
    .unwrap()
}

/// Seeded random connected system with at most `max_edges` edges; the
/// distinguished set is a random nonempty subset containing the root.
pub fn random_system(seed: u64, max_edges: usize) -> FiniteSystem {
    use crate::coupling::HashStream;
    let stream = HashStream::new(seed, 0x73797374);
    let n = 4 + stream.below_at(0, 4) as usize; // 4..=7 vertices
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // spanning tree first so the graph is connected
    for v in 1..n {
        let u = stream.below_at(v as u64, v as u64) as usize;
        edges.push((u.min(v), u.max(v)));
    }
    let mut counter = 100u64;
    while edges.len() < max_edges.min(n * (n - 1) / 2) {
        let u = stream.below_at(counter, n as u64) as usize;
        let v = stream.below_at(counter + 1, n as u64) as usize;
        counter += 2;
        if u != v {
            let e = (u.min(v), u.max(v));
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
        if counter > 400 {
            break;
        }
    }
    edges.sort_unstable();
    let mut a_set = vec![0usize];
    for v in 1..n {
        if stream.below_at(1000 + v as u64, 2) == 1 {
            a_set.push(v);
        }
    }
    FiniteSystem::new(&format!("random-{seed}"), n, edges, a_set, 0).unwrap()
}
