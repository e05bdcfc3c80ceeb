//! Threshold and decay estimators: crossing sweeps for the critical point,
//! relative tails, two-point infima, trichotomy scans, and the uniqueness
//! probe. Every curve shares one coupling field per seed across the whole
//! parameter grid, so monotonicity in p holds exactly, not statistically.

pub mod crossing;
pub mod kappa;
pub mod mc;
pub mod pu;
pub mod tail;
pub mod trichotomy;

pub use crossing::{crossing_sweep, crossing_sweep_with_doubling, CrossingCurve, PcEstimate, SweepConfig};
pub use kappa::{kappa_curve, KappaConfig, KappaCurve};
pub use mc::{linear_p_grid, log_grid, seed_list};
pub use pu::{pu_bisection, pu_probe, PuProbeConfig, PuProbeReport, PuVerdict};
pub use tail::{tail_curve, TailConfig, TailCurve};
pub use trichotomy::{trichotomy_scan, TrichotomyConfig, TrichotomyRow};
