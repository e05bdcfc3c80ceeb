//! Events on (configuration, ghost) pairs, with an exhaustive
//! increasing-ness verifier.

use super::system::FiniteSystem;
use crate::error::{Error, Result};

/// A {0,1}-valued observable of the percolation configuration and the
/// ghost field on the distinguished set.
#[derive(Debug, Clone)]
pub enum Event {
    Const(bool),
    EdgeOpen(usize),
    Connected(usize, usize),
    /// `|K_source ∩ A| >= n`.
    ClusterACountAtLeast { source: usize, n: u64 },
    /// Some ghost-marked vertex of `A` lies in the cluster of `source`.
    GhostHitsCluster { source: usize },
}

impl Event {
    pub fn uses_ghost(&self) -> bool {
        matches!(self, Event::GhostHitsCluster { .. })
    }

    pub fn eval(&self, sys: &FiniteSystem, comp: &[u8], mask: u32, ghost: u32) -> bool {
        match self {
            Event::Const(b) => *b,
            Event::EdgeOpen(e) => (mask >> e) & 1 == 1,
            Event::Connected(x, y) => comp[*x] == comp[*y],
            Event::ClusterACountAtLeast { source, n } => {
                sys.cluster_count_in(comp, *source, &sys.a_set) >= *n
            }
            Event::GhostHitsCluster { source } => {
                let c = comp[*source];
                sys.a_set
                    .iter()
                    .enumerate()
                    .any(|(i, &v)| comp[v] == c && (ghost >> i) & 1 == 1)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Event::Const(b) => format!("const {b}"),
            Event::EdgeOpen(e) => format!("edge {e} open"),
            Event::Connected(x, y) => format!("{x} <-> {y}"),
            Event::ClusterACountAtLeast { source, n } => format!("|K_{source} ∩ A| >= {n}"),
            Event::GhostHitsCluster { source } => format!("ghost hits K_{source}"),
        }
    }
}

/// Truth table of an event over all (mask, ghost) pairs; components are
/// computed once per mask and shared across ghosts.
pub fn truth_table(sys: &FiniteSystem, event: &Event, ghost_bits: usize) -> Vec<bool> {
    let e = sys.edge_count();
    let mut table = vec![false; 1usize << (e + ghost_bits)];
    for mask in 0..(1u32 << e) {
        let comp = sys.components(mask);
        for ghost in 0..(1u32 << ghost_bits) {
            table[index_of(mask, ghost, e)] = event.eval(sys, &comp, mask, ghost);
        }
    }
    table
}

#[inline]
pub fn index_of(mask: u32, ghost: u32, edge_count: usize) -> usize {
    (mask as usize) | ((ghost as usize) << edge_count)
}

/// Exhaustively verify that the event is increasing in every edge and
/// ghost coordinate; returns the witness coordinate on failure.
pub fn verify_increasing(sys: &FiniteSystem, event: &Event, ghost_bits: usize) -> Result<()> {
    let e = sys.edge_count();
    let table = truth_table(sys, event, ghost_bits);
    for mask in 0..(1u32 << e) {
        for ghost in 0..(1u32 << ghost_bits) {
            let here = table[index_of(mask, ghost, e)];
            if !here {
                continue;
            }
            for bit in 0..e {
                if (mask >> bit) & 1 == 0 && !table[index_of(mask | (1 << bit), ghost, e)] {
                    return Err(Error::NotIncreasing { edge: bit });
                }
            }
            for bit in 0..ghost_bits {
                if (ghost >> bit) & 1 == 0 && !table[index_of(mask, ghost | (1 << bit), e)] {
                    return Err(Error::NotIncreasing { edge: e + bit });
                }
            }
        }
    }
    Ok(())
}
