//! Group models with exact normal forms, Cayley-ball construction, and
//! subgroup oracles. Every other module addresses vertices only through
//! this one.

pub mod ball;
pub mod dsl;
pub mod elem;
pub mod finite;
pub mod model;
pub mod subgroup;

pub use ball::{build_ball, build_ball_capped, edge_key, subgroup_ball_count, BallEdge, BallGraph, SubgroupId};
pub use dsl::{parse_element, parse_group, parse_subgroup};
pub use elem::Elem;
pub use model::GroupModel;
pub use subgroup::{MembershipRule, SubgroupSpec};
