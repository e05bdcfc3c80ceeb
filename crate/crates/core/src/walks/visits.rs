//! Cluster-visit statistics of the ambient simple random walk: how many
//! distinct clusters a walk meets and how it keeps (or stops) returning to
//! its starting cluster as the horizon grows.

use rayon::prelude::*;

use super::walk::{run_walk, WalkKind};
use crate::coupling::CouplingField;
use crate::error::Result;
use crate::groups::BallGraph;
use crate::percolation::{clusters, sample};
use crate::stats::mean_se;

#[derive(Debug, Clone)]
pub struct VisitConfig {
    pub p: f64,
    /// Increasing walk horizons; statistics are reported at each.
    pub horizons: Vec<u64>,
    pub walks: u64,
    pub base_seed: u64,
}

#[derive(Debug, Clone)]
pub struct VisitRow {
    pub seed: u64,
    pub distinct_clusters: u64,
    /// Re-entries into the starting cluster after first leaving it.
    pub returns_to_start: u64,
    /// Fraction of steps spent in the starting cluster, per horizon.
    pub start_fraction: Vec<f64>,
    pub reflection_fraction: f64,
}

#[derive(Debug, Clone)]
pub struct VisitTrend {
    /// Mean start-cluster fraction per horizon.
    pub mean_fraction: Vec<f64>,
    /// Paired mean difference between consecutive horizons, with its
    /// standard error: positive means the fraction drops as T grows.
    pub drop_mean: Vec<f64>,
    pub drop_se: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct VisitReport {
    pub rows: Vec<VisitRow>,
    pub trend: VisitTrend,
}

/// Run `walks` independent (field, walk) seed pairs; each walk runs to the
/// largest horizon and is summarized at every horizon prefix.
pub fn visit_count_experiment(
    ball: &BallGraph,
    cfg: &VisitConfig,
) -> Result<VisitReport> {
    let horizons = cfg.horizons.clone();
    let t_max = *horizons.last().expect("nonempty horizons");
    let rows: Vec<VisitRow> = (0..cfg.walks)
        .into_par_iter()
        .map(|i| {
            let field_seed = cfg.base_seed.wrapping_add(2 * i);
            let walk_seed = cfg.base_seed.wrapping_add(2 * i + 1);
            let config = sample(ball, &CouplingField::new(field_seed), cfg.p)?;
            let part = clusters(ball, &config);
            let path = run_walk(ball, &WalkKind::Ambient, t_max, walk_seed)?;

            let start_cluster = part.cluster_of(path.positions[0]);
            let mut seen = vec![false; part.cluster_count()];
            let mut distinct = 0u64;
            let mut returns = 0u64;
            let mut left_once = false;
            let mut in_start = true;
            let mut start_steps = 0u64;
            let mut fractions = Vec::with_capacity(horizons.len());
            let mut h_iter = horizons.iter().peekable();
            for (step, &v) in path.positions.iter().enumerate().skip(1) {
                let c = part.cluster_of(v);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    distinct += 1;
                }
                let now_in_start = c == start_cluster;
                if now_in_start {
                    start_steps += 1;
                    if !in_start && left_once {
                        returns += 1;
                    }
                } else {
                    left_once = true;
                }
                in_start = now_in_start;
                while let Some(&&h) = h_iter.peek() {
                    if step as u64 == h {
                        fractions.push(start_steps as f64 / h as f64);
                        h_iter.next();
                    } else {
                        break;
                    }
                }
            }
            Ok(VisitRow {
                seed: field_seed,
                distinct_clusters: distinct,
                returns_to_start: returns,
                start_fraction: fractions,
                reflection_fraction: path.reflection_fraction(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(summarize(rows, &horizons))
}

/// The same experiment on the infinite graph of a tree model, with an
/// unconstrained walk. The walk trace is a subtree, so two visited
/// vertices lie in the same cluster exactly when the open edges of the
/// trace connect them, and membership in the starting cluster is a closed-
/// edge counter along the root geodesic. A reflected walk in a finite ball
/// equilibrates and hides the escape trend; this route has no boundary at
/// all.
pub fn visit_experiment_tree(
    model: &crate::groups::GroupModel,
    cfg: &VisitConfig,
) -> Result<VisitReport> {
    if !model.is_tree() || !model.is_group() {
        return Err(crate::error::Error::UnsupportedFamily(format!(
            "infinite-volume visit experiment needs a tree group model, got {}",
            model.dsl_name()
        )));
    }
    let horizons = cfg.horizons.clone();
    let t_max = *horizons.last().expect("nonempty horizons");
    let generators = model.generators()?;
    let rows: Vec<VisitRow> = (0..cfg.walks)
        .into_par_iter()
        .map(|i| {
            let field_seed = cfg.base_seed.wrapping_add(2 * i);
            let walk_seed = cfg.base_seed.wrapping_add(2 * i + 1);
            let field = CouplingField::new(field_seed);
            let stream = crate::coupling::HashStream::new(walk_seed, 0x77616c6b);

            // trace nodes: parent pointer, status of the parent edge, and
            // a child slot per generator
            struct Node {
                parent: u32,
                parent_edge_open: bool,
                children: Vec<Option<u32>>,
            }
            let mut nodes = vec![Node {
                parent: 0,
                parent_edge_open: true,
                children: vec![None; generators.len()],
            }];
            let mut uf = crate::percolation::UnionFind::new(1);
            let mut merges = 0u64;
            let mut cur_idx = 0u32;
            let mut cur = model.identity();
            let mut cur_dist = 0u64;
            let mut closed_on_root_path = 0u64;

            let mut returns = 0u64;
            let mut left_once = false;
            let mut in_start = true;
            let mut start_steps = 0u64;
            let mut fractions = Vec::with_capacity(horizons.len());
            let mut h_iter = horizons.iter().peekable();

            for step in 1..=t_max {
                let g_idx = stream.below_at(step, generators.len() as u64) as usize;
                let next = model.multiply(&cur, &generators[g_idx])?;
                let next_dist = model.dist_to_root(&next).expect("tree metric");
                let next_idx;
                let edge_open;
                if next_dist < cur_dist {
                    // retract toward the root along the trace
                    let node = &nodes[cur_idx as usize];
                    next_idx = node.parent;
                    edge_open = node.parent_edge_open;
                    closed_on_root_path -= (!edge_open) as u64;
                } else {
                    match nodes[cur_idx as usize].children[g_idx] {
                        Some(idx) => {
                            next_idx = idx;
                            edge_open = nodes[idx as usize].parent_edge_open;
                        }
                        None => {
                            let open =
                                field.open(crate::groups::edge_key(&cur, &next), cfg.p);
                            next_idx = nodes.len() as u32;
                            nodes.push(Node {
                                parent: cur_idx,
                                parent_edge_open: open,
                                children: vec![None; generators.len()],
                            });
                            nodes[cur_idx as usize].children[g_idx] = Some(next_idx);
                            uf.push();
                            edge_open = open;
                        }
                    }
                    closed_on_root_path += (!edge_open) as u64;
                }
                if edge_open {
                    merges += uf.union(cur_idx, next_idx) as u64;
                }
                cur = next;
                cur_dist = next_dist;
                cur_idx = next_idx;

                let now_in_start = closed_on_root_path == 0;
                if now_in_start {
                    start_steps += 1;
                    if !in_start && left_once {
                        returns += 1;
                    }
                } else {
                    left_once = true;
                }
                in_start = now_in_start;
                while let Some(&&h) = h_iter.peek() {
                    if step == h {
                        fractions.push(start_steps as f64 / h as f64);
                        h_iter.next();
                    } else {
                        break;
                    }
                }
            }
            Ok(VisitRow {
                seed: field_seed,
                distinct_clusters: nodes.len() as u64 - merges,
                returns_to_start: returns,
                start_fraction: fractions,
                reflection_fraction: 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(summarize(rows, &horizons))
}

fn summarize(rows: Vec<VisitRow>, horizons: &[u64]) -> VisitReport {
    let mut mean_fraction = Vec::new();
    let mut drop_mean = Vec::new();
    let mut drop_se = Vec::new();
    for h in 0..horizons.len() {
        let vals: Vec<f64> = rows.iter().map(|r| r.start_fraction[h]).collect();
        mean_fraction.push(vals.iter().sum::<f64>() / vals.len() as f64);
        if h > 0 {
            let diffs: Vec<f64> = rows
                .iter()
                .map(|r| r.start_fraction[h - 1] - r.start_fraction[h])
                .collect();
            let (m, ci) = mean_se(&diffs, 1.0);
            drop_mean.push(m);
            drop_se.push((ci.hi - ci.lo) / 2.0);
        }
    }
    VisitReport { rows, trend: VisitTrend { mean_fraction, drop_mean, drop_se } }
}
