//! Decision forests: adaptive query procedures whose revealment weights
//! the OSSS covariance bound.

use super::system::FiniteSystem;

/// One decision tree of a forest.
#[derive(Debug, Clone)]
pub enum TreeSpec {
    /// Query the ghost mark of `source` first; when it is 1, explore the
    /// cluster of `source` FIFO over the frontier with canonical
    /// (index-ordered) edge tie-breaking, revealing every incident edge.
    GhostCluster { source: usize },
    /// A fixed (non-adaptive) edge query sequence.
    FixedEdges(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct DecisionForest {
    pub trees: Vec<TreeSpec>,
}

impl DecisionForest {
    /// The forest of ghost-cluster trees, one per vertex of `A`.
    pub fn ghost_forest(sys: &FiniteSystem) -> DecisionForest {
        DecisionForest {
            trees: sys
                .a_set
                .iter()
                .map(|&u| TreeSpec::GhostCluster { source: u })
                .collect(),
        }
    }

    pub fn uses_ghost(&self) -> bool {
        self.trees.iter().any(|t| matches!(t, TreeSpec::GhostCluster { .. }))
    }
}

/// One query of a transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Query {
    Edge(usize),
    Ghost(usize), // index into a_set
}

/// Simulate one tree on `(mask, ghost)`; the transcript lists every query
/// with its answer, in order.
pub fn run_tree(
    sys: &FiniteSystem,
    tree: &TreeSpec,
    mask: u32,
    ghost: u32,
    transcript: &mut Vec<(Query, bool)>,
) {
    match tree {
        TreeSpec::FixedEdges(seq) => {
            for &e in seq {
                transcript.push((Query::Edge(e), (mask >> e) & 1 == 1));
            }
        }
        TreeSpec::GhostCluster { source } => {
            let gi = sys
                .a_set
                .iter()
                .position(|&v| v == *source)
                .expect("ghost source must lie in A");
            let marked = (ghost >> gi) & 1 == 1;
            transcript.push((Query::Ghost(gi), marked));
            if !marked {
                return;
            }
            // FIFO cluster exploration revealing all incident edges
            let mut visited = vec![false; sys.n];
            let mut queried = vec![false; sys.edge_count()];
            let mut queue = std::collections::VecDeque::new();
            visited[*source] = true;
            queue.push_back(*source);
            while let Some(v) = queue.pop_front() {
                for (e, &(a, b)) in sys.edges.iter().enumerate() {
                    if queried[e] || (a != v && b != v) {
                        continue;
                    }
                    queried[e] = true;
                    let open = (mask >> e) & 1 == 1;
                    transcript.push((Query::Edge(e), open));
                    if open {
                        let w = if a == v { b } else { a };
                        if !visited[w] {
                            visited[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
    }
}

/// The revealed set of a ghost-cluster tree must be `{u}` when the ghost
/// is off and `{u} ∪ E(K_u)` when it is on.
pub fn revealed_set_matches_closed_form(
    sys: &FiniteSystem,
    tree: &TreeSpec,
    mask: u32,
    ghost: u32,
) -> bool {
    let TreeSpec::GhostCluster { source } = tree else {
        return true;
    };
    let mut transcript = Vec::new();
    run_tree(sys, tree, mask, ghost, &mut transcript);
    let revealed_edges: std::collections::BTreeSet<usize> = transcript
        .iter()
        .filter_map(|(q, _)| match q {
            Query::Edge(e) => Some(*e),
            Query::Ghost(_) => None,
        })
        .collect();
    let gi = sys.a_set.iter().position(|&v| v == *source).unwrap();
    if (ghost >> gi) & 1 == 0 {
        return revealed_edges.is_empty();
    }
    let comp = sys.components(mask);
    let expected: std::collections::BTreeSet<usize> = sys
        .edges
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| comp[a] == comp[*source] || comp[b] == comp[*source])
        .map(|(e, _)| e)
        .collect();
    revealed_edges == expected
}

/// Edges revealed by the whole forest on `(mask, ghost)` as a bitmask.
pub fn forest_revealed_edges(sys: &FiniteSystem, forest: &DecisionForest, mask: u32, ghost: u32) -> u32 {
    let mut out = 0u32;
    let mut transcript = Vec::new();
    for tree in &forest.trees {
        transcript.clear();
        run_tree(sys, tree, mask, ghost, &mut transcript);
        for (q, _) in &transcript {
            if let Query::Edge(e) = q {
                out |= 1 << e;
            }
        }
    }
    out
}

/// Full forest transcript, used to verify that the forest computes a
/// function: two inputs with the same transcript must give the same value.
pub fn forest_transcript(
    sys: &FiniteSystem,
    forest: &DecisionForest,
    mask: u32,
    ghost: u32,
) -> Vec<(Query, bool)> {
    let mut out = Vec::new();
    let mut scratch = Vec::new();
    for tree in &forest.trees {
        scratch.clear();
        run_tree(sys, tree, mask, ghost, &mut scratch);
        out.extend_from_slice(&scratch);
    }
    out
}
