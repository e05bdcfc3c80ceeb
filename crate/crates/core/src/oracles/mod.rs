//! Exact, enumeration-based verification of the covariance, derivative,
//! tail, mass-transport, and spanning-tree identities on small instances.
//! Every check here is exact (rational arithmetic or compensated floating
//! sums gated at 1e-12), never statistical; a violation is a hard failure.

pub mod builtin;
pub mod event;
pub mod forest;
pub mod integral;
pub mod kgh;
pub mod mtp;
pub mod osss;
pub mod report;
pub mod russo;
pub mod spanning;
pub mod system;
pub mod tilted;

pub use builtin::{oracle_names, run_builtin};
pub use event::Event;
pub use forest::{DecisionForest, TreeSpec};
pub use integral::{integral_inequality_check, IntegralCheck};
pub use kgh::{generated_subgroup, kgh_identity_check, KghCheck};
pub use mtp::{mtp_check, Kernel, MtpCheck, RootRule};
pub use osss::{osss_check, GhostField, OsssCheck, EXACT_GAP_TOLERANCE};
pub use report::OracleReport;
pub use russo::{russo_check, RussoCheck};
pub use spanning::{spanning_tree_from_partitions, uniform_spanning_tree, SimpleGraph, SpanningLevels};
pub use system::{big_rational, exact_q_curve, FiniteSystem};
pub use tilted::{tilted_mtp_check, DisplacementKernel, TiltedMtpCheck};
