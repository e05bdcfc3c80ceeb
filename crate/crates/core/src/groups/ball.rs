//! Truncated Cayley balls: BFS-complete, deterministically ordered, with
//! canonical per-edge keys shared by every radius and every experiment.

use std::collections::HashMap;

use super::elem::Elem;
use super::model::GroupModel;
use super::subgroup::SubgroupSpec;
use crate::coupling::fnv1a64;
use crate::error::{Error, Result};

/// Canonical key of the undirected edge `{u, v}`: hash of the two normal
/// forms in lexicographic encoding order. Stable across radii, so a single
/// coupling field is consistent between different balls of the same model.
pub fn edge_key(u: &Elem, v: &Elem) -> u64 {
    let eu = u.encode();
    let ev = v.encode();
    let (a, b) = if eu <= ev { (&eu, &ev) } else { (&ev, &eu) };
    let mut bytes = Vec::with_capacity(a.len() + b.len() + 4);
    bytes.extend_from_slice(&(a.len() as u32).to_be_bytes());
    bytes.extend_from_slice(a);
    bytes.extend_from_slice(b);
    fnv1a64(&bytes)
}

#[derive(Debug, Clone, Copy)]
pub struct BallEdge {
    pub a: u32,
    pub b: u32,
    pub key: u64,
}

#[derive(Debug)]
struct RegisteredSubgroup {
    spec: SubgroupSpec,
    mask: Vec<bool>,
    member_count: u64,
}

/// The ball `B_R(o)` of a model: indexed vertices in BFS order (ties broken
/// by normal-form encoding), edge list with canonical keys, root distances,
/// and boundary flags. Immutable after construction apart from subgroup
/// registration.
#[derive(Debug)]
pub struct BallGraph {
    model: GroupModel,
    radius: u32,
    verts: Vec<Elem>,
    index: HashMap<Elem, u32>,
    dist: Vec<u32>,
    edges: Vec<BallEdge>,
    adj_off: Vec<u32>,
    adj: Vec<u32>,
    subgroups: Vec<RegisteredSubgroup>,
}

pub const DEFAULT_VERTEX_CAP: usize = 16_000_000;

/// BFS closure of the identity to depth `R`. Vertex 0 is the identity;
/// each BFS layer is sorted by normal-form encoding, which makes the
/// vertex order of radius `R` a prefix of radius `R + 1`.
pub fn build_ball(model: &GroupModel, radius: u32) -> Result<BallGraph> {
    build_ball_capped(model, radius, DEFAULT_VERTEX_CAP)
}

pub fn build_ball_capped(model: &GroupModel, radius: u32, cap: usize) -> Result<BallGraph> {
    if model.is_group() {
        let gens = model.generators()?;
        let e = model.identity();
        for (i, g) in gens.iter().enumerate() {
            if *g == e {
                return Err(Error::BadGenerators("identity generator gives a loop".into()));
            }
            if gens[..i].contains(g) {
                return Err(Error::BadGenerators(format!(
                    "duplicate generator gives a multi-edge: {}",
                    g.display()
                )));
            }
        }
    }

    let root = model.identity();
    let mut verts = vec![root.clone()];
    let mut index: HashMap<Elem, u32> = HashMap::new();
    index.insert(root, 0);
    let mut dist = vec![0u32];

    let mut layer: Vec<u32> = vec![0];
    for depth in 1..=radius {
        let mut next: Vec<Elem> = Vec::new();
        for &vi in &layer {
            let v = verts[vi as usize].clone();
            for n in model.neighbors(&v)? {
                if !index.contains_key(&n) {
                    index.insert(n.clone(), u32::MAX); // placeholder to dedupe
                    next.push(n);
                }
            }
        }
        // decorate with the encoding once; comparing on the fly would
        // re-encode per comparison
        let mut decorated: Vec<(Vec<u8>, Elem)> =
            next.into_iter().map(|n| (n.encode(), n)).collect();
        decorated.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        layer = Vec::with_capacity(decorated.len());
        for (_, n) in decorated {
            let id = verts.len() as u32;
            if verts.len() >= cap {
                return Err(Error::MemoryBudget { got: verts.len() + 1, cap });
            }
            *index.get_mut(&n).unwrap() = id;
            verts.push(n);
            dist.push(depth);
            layer.push(id);
        }
        if layer.is_empty() {
            break; // finite graph exhausted
        }
    }

    // edge list: scan each vertex's neighbors, keep pairs inside the ball
    let mut edges = Vec::new();
    let mut adj_lists: Vec<Vec<u32>> = vec![Vec::new(); verts.len()];
    for (ui, u) in verts.iter().enumerate() {
        for n in model.neighbors(u)? {
            if let Some(&vi) = index.get(&n) {
                if (ui as u32) < vi {
                    edges.push(BallEdge {
                        a: ui as u32,
                        b: vi,
                        key: edge_key(u, &n),
                    });
                    adj_lists[ui].push(vi);
                    adj_lists[vi as usize].push(ui as u32);
                }
            }
        }
    }

    let mut adj_off = Vec::with_capacity(verts.len() + 1);
    let mut adj = Vec::with_capacity(2 * edges.len());
    adj_off.push(0u32);
    for l in &adj_lists {
        adj.extend_from_slice(l);
        adj_off.push(adj.len() as u32);
    }

    Ok(BallGraph {
        model: model.clone(),
        radius,
        verts,
        index,
        dist,
        edges,
        adj_off,
        adj,
        subgroups: Vec::new(),
    })
}

impl BallGraph {
    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[BallEdge] {
        &self.edges
    }

    pub fn vertex(&self, i: u32) -> &Elem {
        &self.verts[i as usize]
    }

    pub fn dist(&self, i: u32) -> u32 {
        self.dist[i as usize]
    }

    pub fn is_boundary(&self, i: u32) -> bool {
        self.dist[i as usize] == self.radius
    }

    pub fn index_of(&self, v: &Elem) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn neighbors_of(&self, i: u32) -> &[u32] {
        let lo = self.adj_off[i as usize] as usize;
        let hi = self.adj_off[i as usize + 1] as usize;
        &self.adj[lo..hi]
    }

    /// Vertex indices at distance exactly `d` from the root.
    pub fn sphere(&self, d: u32) -> Vec<u32> {
        (0..self.verts.len() as u32)
            .filter(|&i| self.dist[i as usize] == d)
            .collect()
    }

    /// Register a distinguished vertex set; returns a handle used by the
    /// cluster statistics.
    pub fn register_subgroup(&mut self, spec: SubgroupSpec) -> Result<SubgroupId> {
        let mut mask = Vec::with_capacity(self.verts.len());
        let mut count = 0u64;
        for v in &self.verts {
            let m = spec.matches(&self.model, v)?;
            count += m as u64;
            mask.push(m);
        }
        self.subgroups.push(RegisteredSubgroup { spec, mask, member_count: count });
        Ok(SubgroupId(self.subgroups.len() - 1))
    }

    pub fn subgroup_count(&self) -> usize {
        self.subgroups.len()
    }

    pub fn subgroup_label(&self, id: SubgroupId) -> &str {
        &self.subgroups[id.0].spec.label
    }

    pub fn subgroup_spec(&self, id: SubgroupId) -> &SubgroupSpec {
        &self.subgroups[id.0].spec
    }

    pub fn subgroup_mask(&self, id: SubgroupId) -> &[bool] {
        &self.subgroups[id.0].mask
    }

    pub fn subgroup_member_count(&self, id: SubgroupId) -> u64 {
        self.subgroups[id.0].member_count
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgroupId(pub usize);

/// `|B_n(o) ∩ H|` for `n = 0..=R`.
pub fn subgroup_ball_count(ball: &BallGraph, id: SubgroupId) -> Vec<u64> {
    let mask = ball.subgroup_mask(id);
    let mut counts = vec![0u64; ball.radius() as usize + 1];
    for i in 0..ball.vertex_count() {
        if mask[i] {
            counts[ball.dist(i as u32) as usize] += 1;
        }
    }
    for n in 1..counts.len() {
        counts[n] += counts[n - 1];
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::subgroup::SubgroupSpec;

    #[test]
    fn line_ball_size() {
        let model = GroupModel::lattice(1).unwrap();
        let ball = build_ball(&model, 3).unwrap();
        assert_eq!(ball.vertex_count(), 7);
        assert_eq!(ball.edge_count(), 6);
    }

    #[test]
    fn free_ball_matches_closed_form() {
        let model = GroupModel::free(2).unwrap();
        for r in 0..=6u32 {
            let ball = build_ball(&model, r).unwrap();
            // 2 * 3^R - 1 vertices on the 4-regular tree
            let expect = 2 * 3usize.pow(r) - 1;
            assert_eq!(ball.vertex_count(), expect, "radius {r}");
            assert_eq!(ball.edge_count(), expect - 1);
        }
    }

    #[test]
    fn edges_join_adjacent_layers() {
        let model = GroupModel::lattice(2).unwrap();
        let ball = build_ball(&model, 4).unwrap();
        for e in ball.edges() {
            let da = ball.dist(e.a) as i64;
            let db = ball.dist(e.b) as i64;
            assert!((da - db).abs() <= 1);
        }
        assert_eq!(ball.dist(0), 0);
        assert_eq!(ball.vertex(0), &model.identity());
    }

    #[test]
    fn ball_prefix_property() {
        let model = GroupModel::free(2).unwrap();
        let small = build_ball(&model, 3).unwrap();
        let large = build_ball(&model, 4).unwrap();
        for i in 0..small.vertex_count() {
            assert_eq!(small.vertex(i as u32), large.vertex(i as u32));
        }
    }

    #[test]
    fn edge_keys_stable_across_radii() {
        let model = GroupModel::free(2).unwrap();
        let small = build_ball(&model, 2).unwrap();
        let large = build_ball(&model, 3).unwrap();
        let mut keys_small: Vec<u64> = small.edges().iter().map(|e| e.key).collect();
        let keys_large: std::collections::HashSet<u64> =
            large.edges().iter().map(|e| e.key).collect();
        keys_small.sort_unstable();
        keys_small.dedup();
        assert_eq!(keys_small.len(), small.edge_count(), "edge keys collide");
        for k in keys_small {
            assert!(keys_large.contains(&k));
        }
    }

    #[test]
    fn axis_counts_in_square_lattice() {
        let model = GroupModel::lattice(2).unwrap();
        let mut ball = build_ball(&model, 5).unwrap();
        let id = ball
            .register_subgroup(SubgroupSpec::axis(&model, 0).unwrap())
            .unwrap();
        let counts = subgroup_ball_count(&ball, id);
        assert_eq!(counts, vec![1, 3, 5, 7, 9, 11]);
    }

    #[test]
    fn whole_group_counts_equal_ball_sizes() {
        let model = GroupModel::free(2).unwrap();
        let mut ball = build_ball(&model, 4).unwrap();
        let id = ball
            .register_subgroup(SubgroupSpec::all(&model).unwrap())
            .unwrap();
        let counts = subgroup_ball_count(&ball, id);
        for (n, &c) in counts.iter().enumerate() {
            assert_eq!(c, (2 * 3u64.pow(n as u32) - 1), "radius {n}");
        }
    }

    #[test]
    fn finite_ball_exhausts_group() {
        let model = GroupModel::Finite(crate::groups::finite::s3());
        let ball = build_ball(&model, 10).unwrap();
        assert_eq!(ball.vertex_count(), 6);
        assert_eq!(ball.edge_count(), 9);
    }

    #[test]
    fn oriented_tree_ball_count() {
        // 3 * 2^R - 2 vertices for the oriented 3-regular tree
        let model = GroupModel::oriented_tree(3).unwrap();
        for r in 1..=8u32 {
            let ball = build_ball(&model, r).unwrap();
            assert_eq!(ball.vertex_count(), 3 * 2usize.pow(r) - 2, "radius {r}");
            assert_eq!(ball.edge_count(), ball.vertex_count() - 1);
        }
    }

    #[test]
    fn memory_cap_is_enforced() {
        let model = GroupModel::free(2).unwrap();
        let err = build_ball_capped(&model, 8, 100).unwrap_err();
        assert!(matches!(err, Error::MemoryBudget { .. }));
    }
}
