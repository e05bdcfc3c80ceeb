//! Subgroup random walks, cluster frequency estimation, max-frequency
//! cluster selection, and the cluster-visit experiment.

pub mod frequency;
pub mod visits;
pub mod walk;

pub use frequency::{
    cluster_step_counts, frequency, max_frequency_cluster, set_frequency, FrequencyEstimate,
};
pub use visits::{visit_count_experiment, visit_experiment_tree, VisitConfig, VisitReport, VisitRow};
pub use walk::{run_walk, WalkKind, WalkPath};
