//! Random walks on a ball: subgroup walks driven by the subgroup's own
//! generators, and ambient simple random walks.

use crate::coupling::HashStream;
use crate::error::{Error, Result};
use crate::groups::{BallGraph, Elem, SubgroupSpec};

/// Which step distribution drives the walk.
#[derive(Debug, Clone)]
pub enum WalkKind {
    /// Uniform over the subgroup's generators.
    Subgroup(SubgroupSpec),
    /// Uniform over the ambient generating set (simple random walk).
    Ambient,
}

/// A walk constrained to the ball. Steps that would exit are resampled
/// (reflection) and counted; walks whose reflection fraction exceeds 1%
/// carry a flag so boundary bias is surfaced, never hidden.
#[derive(Debug, Clone)]
pub struct WalkPath {
    /// Vertex indices `Z_0..Z_T`; `Z_0` is the identity.
    pub positions: Vec<u32>,
    pub reflections: u64,
    pub proposals: u64,
    pub seed: u64,
}

impl WalkPath {
    pub fn steps(&self) -> u64 {
        self.positions.len() as u64 - 1
    }

    pub fn reflection_fraction(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.reflections as f64 / self.proposals as f64
        }
    }

    pub fn flagged(&self) -> bool {
        self.reflection_fraction() > 0.01
    }
}

const TRAP_SCAN_MULTIPLIER: u64 = 64;

/// Run a `steps`-step walk from the identity. Step `i` chooses a generator
/// by keyed hash draw `(seed, i, attempt)`; out-of-ball proposals are
/// rejected and redrawn. Aborts with a diagnostic when no generator move
/// stays inside the ball.
pub fn run_walk(ball: &BallGraph, kind: &WalkKind, steps: u64, seed: u64) -> Result<WalkPath> {
    let model = ball.model();
    let generators = match kind {
        WalkKind::Subgroup(spec) => {
            if spec.generators.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "set `{}` has no generators to walk with",
                    spec.label
                )));
            }
            spec.generators.clone()
        }
        WalkKind::Ambient => model.generators()?,
    };
    let stream = HashStream::new(seed, 0x77616c6b);
    let mut positions = Vec::with_capacity(steps as usize + 1);
    let mut current_idx = 0u32;
    let mut current = ball.vertex(0).clone();
    positions.push(current_idx);
    let mut reflections = 0u64;
    let mut proposals = 0u64;
    let mut counter = 0u64;

    for step in 0..steps {
        let mut attempt = 0u64;
        loop {
            let g = &generators[stream.below_at(counter, generators.len() as u64) as usize];
            counter += 1;
            proposals += 1;
            let target = model.multiply(&current, g)?;
            if let Some(idx) = ball.index_of(&target) {
                current = target;
                current_idx = idx;
                break;
            }
            reflections += 1;
            attempt += 1;
            if attempt >= TRAP_SCAN_MULTIPLIER * generators.len() as u64 {
                // rejection is unlucky or impossible: enumerate the valid
                // moves once and finish deterministically
                let valid: Vec<Elem> = generators
                    .iter()
                    .map(|g| model.multiply(&current, g))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .filter(|t| ball.index_of(t).is_some())
                    .collect();
                if valid.is_empty() {
                    return Err(Error::WalkerTrapped {
                        step,
                        vertex: current.display(),
                    });
                }
                let pick = stream.below_at(counter, valid.len() as u64) as usize;
                counter += 1;
                current = valid[pick].clone();
                current_idx = ball.index_of(&current).unwrap();
                break;
            }
        }
        positions.push(current_idx);
    }

    Ok(WalkPath { positions, reflections, proposals, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_ball, GroupModel};

    #[test]
    fn zero_steps_is_the_identity_path() {
        let model = GroupModel::lattice(1).unwrap();
        let ball = build_ball(&model, 3).unwrap();
        let path = run_walk(&ball, &WalkKind::Ambient, 0, 1).unwrap();
        assert_eq!(path.positions, vec![0]);
        assert_eq!(path.steps(), 0);
    }

    #[test]
    fn symmetric_steps_have_zero_mean() {
        let model = GroupModel::lattice(1).unwrap();
        let ball = build_ball(&model, 60).unwrap();
        let t = 400u64;
        let path = run_walk(&ball, &WalkKind::Ambient, t, 12).unwrap();
        let Elem::Lattice(endpoint) = ball.vertex(*path.positions.last().unwrap()).clone() else {
            panic!()
        };
        let mean_step = endpoint[0] as f64 / t as f64;
        assert!(mean_step.abs() <= 3.0 / (t as f64).sqrt(), "mean step {mean_step}");
        assert_eq!(path.reflections, 0);
    }

    #[test]
    fn lamp_walk_stays_in_the_subgroup() {
        let model = GroupModel::wreath_z2(GroupModel::free(2).unwrap()).unwrap();
        let ball = build_ball(&model, 4).unwrap();
        let spec = crate::groups::SubgroupSpec::lamp(&model, 1).unwrap();
        let path = run_walk(&ball, &WalkKind::Subgroup(spec.clone()), 200, 9).unwrap();
        for &i in &path.positions {
            assert!(spec.matches(&model, ball.vertex(i)).unwrap());
        }
    }

    #[test]
    fn trapped_walker_aborts() {
        // radius-0 ball: every move exits
        let model = GroupModel::lattice(1).unwrap();
        let ball = build_ball(&model, 0).unwrap();
        let err = run_walk(&ball, &WalkKind::Ambient, 5, 3).unwrap_err();
        assert!(matches!(err, Error::WalkerTrapped { .. }));
    }

    #[test]
    fn reflections_are_logged_on_tight_balls() {
        let model = GroupModel::free(2).unwrap();
        let ball = build_ball(&model, 3).unwrap();
        let path = run_walk(&ball, &WalkKind::Ambient, 500, 4).unwrap();
        assert!(path.reflections > 0);
        assert!(path.flagged());
    }
}
