//! Union-find clustering with per-cluster subgroup statistics.

use super::config::Configuration;
use crate::groups::{BallGraph, SubgroupId};

/// Disjoint-set forest with union by rank and path compression.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    /// Append a fresh singleton and return its index.
    pub fn push(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.rank.push(0);
        id
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
        true
    }
}

/// Per-cluster statistics of one configuration.
#[derive(Debug, Clone)]
pub struct ClusterRecord {
    /// Lowest vertex index of the cluster.
    pub representative: u32,
    pub size: u64,
    pub touches_boundary: bool,
    /// Members per registered subgroup, in registration order.
    pub count_in: Vec<u64>,
}

/// The exact partition of a ball into open-edge components.
#[derive(Debug, Clone)]
pub struct ClusterPartition {
    /// Cluster id per vertex; ids are dense, ordered by representative.
    pub cluster_of: Vec<u32>,
    pub clusters: Vec<ClusterRecord>,
}

/// Exact partition into open-cluster components of `config`.
pub fn clusters(ball: &BallGraph, config: &Configuration) -> ClusterPartition {
    let n = ball.vertex_count();
    let mut uf = UnionFind::new(n);
    for (i, e) in ball.edges().iter().enumerate() {
        if config.is_open(i) {
            uf.union(e.a, e.b);
        }
    }
    finalize(ball, &mut uf)
}

/// Turn a populated union-find into dense cluster records.
pub fn finalize(ball: &BallGraph, uf: &mut UnionFind) -> ClusterPartition {
    let n = ball.vertex_count();
    let n_sub = ball.subgroup_count();
    let mut id_of_root: Vec<u32> = vec![u32::MAX; n];
    let mut cluster_of = vec![0u32; n];
    let mut clusters: Vec<ClusterRecord> = Vec::new();
    for v in 0..n as u32 {
        let root = uf.find(v);
        let id = if id_of_root[root as usize] == u32::MAX {
            let id = clusters.len() as u32;
            id_of_root[root as usize] = id;
            clusters.push(ClusterRecord {
                representative: v,
                size: 0,
                touches_boundary: false,
                count_in: vec![0; n_sub],
            });
            id
        } else {
            id_of_root[root as usize]
        };
        cluster_of[v as usize] = id;
        let rec = &mut clusters[id as usize];
        rec.size += 1;
        rec.touches_boundary |= ball.is_boundary(v);
        for s in 0..n_sub {
            rec.count_in[s] += ball.subgroup_mask(SubgroupId(s))[v as usize] as u64;
        }
    }
    ClusterPartition { cluster_of, clusters }
}

impl ClusterPartition {
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_of(&self, v: u32) -> u32 {
        self.cluster_of[v as usize]
    }

    /// Id of the largest cluster (ties to the lower id).
    pub fn largest(&self) -> u32 {
        let mut best = 0u32;
        for (i, c) in self.clusters.iter().enumerate() {
            if c.size > self.clusters[best as usize].size {
                best = i as u32;
            }
        }
        best
    }
}

/// Number of clusters that intersect the subgroup in at least `m` vertices
/// and touch the ball boundary: the finite-volume proxy for subgroup-
/// infinite clusters.
pub fn relative_cluster_counts(
    partition: &ClusterPartition,
    subgroup: SubgroupId,
    m: u64,
) -> usize {
    partition
        .clusters
        .iter()
        .filter(|c| c.touches_boundary && c.count_in[subgroup.0] >= m)
        .count()
}
