//! Bernoulli bond percolation on Cayley balls of finitely generated groups,
//! with observables measured relative to a distinguished subgroup: cluster
//! intersections with the subgroup, relative tails, two-point infima, and
//! cluster frequencies along subgroup random walks. Exact enumeration
//! oracles verify the covariance, mass-transport, and spanning-tree
//! identities the estimators rely on.
//!
//! All Monte Carlo randomness is derived from a counter-based keyed hash
//! ([`coupling::CouplingField`]), so every experiment is reproducible
//! bit-for-bit regardless of thread count or edge iteration order.

pub mod coupling;
pub mod error;
pub mod estimators;
pub mod groups;
pub mod oracles;
pub mod percolation;
pub mod stats;
pub mod walks;

pub use coupling::CouplingField;
pub use error::{Error, Result};
pub use groups::{
    build_ball, subgroup_ball_count, BallGraph, Elem, GroupModel, MembershipRule, SubgroupSpec,
};
pub use percolation::{clusters, sample, ClusterPartition, Configuration};
