//! Coupled Bernoulli bond percolation on Cayley balls: configuration
//! sampling, union-find clustering with subgroup-aware statistics, lazy
//! cluster exploration on implicit balls, and two-point estimates.

pub mod cluster;
pub mod config;
pub mod explore;
pub mod two_point;

pub use cluster::{clusters, relative_cluster_counts, ClusterPartition, UnionFind};
pub use config::{sample, Configuration};
pub use explore::{explore_cluster, Flow, LazyBall, MaterialBall, Topology};
pub use two_point::{two_point, TauEstimate};
