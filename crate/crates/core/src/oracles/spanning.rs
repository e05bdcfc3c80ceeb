//! Nested spanning trees from an exhaustive partition sequence: refine
//! each cell to its connected pieces, span each piece with a uniform
//! spanning tree, and at every coarser level draw a uniform spanning tree
//! conditioned to contain the previous forest (Wilson's walk on the
//! contracted multigraph).

use crate::coupling::HashStream;
use crate::error::{Error, Result};
use crate::groups::BallGraph;
use crate::percolation::UnionFind;

/// A small undirected graph with an edge index, the substrate for the
/// spanning-tree construction.
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>, // (neighbor, edge index)
}

impl SimpleGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<SimpleGraph> {
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidParameter(format!("bad edge ({u},{v})")));
            }
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        Ok(SimpleGraph { n, edges, adj })
    }

    pub fn from_ball(ball: &BallGraph) -> SimpleGraph {
        let edges = ball
            .edges()
            .iter()
            .map(|e| (e.a as usize, e.b as usize))
            .collect();
        SimpleGraph::new(ball.vertex_count(), edges).expect("ball edges are valid")
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }
}

/// The forest after each level, as cumulative edge-index sets; the last
/// level is a spanning tree of the whole graph.
#[derive(Debug, Clone)]
pub struct SpanningLevels {
    pub levels: Vec<Vec<usize>>,
    /// Connected-refinement cell ids per level (diagnostics and tests).
    pub refined: Vec<Vec<u32>>,
}

impl SpanningLevels {
    pub fn final_tree(&self) -> &[usize] {
        self.levels.last().expect("at least one level")
    }
}

/// Build the nested forests from a coarsening partition sequence whose
/// final partition is the whole vertex set. Each partition is a cell-id
/// vector per vertex.
pub fn spanning_tree_from_partitions(
    graph: &SimpleGraph,
    partitions: &[Vec<u32>],
    seed: u64,
) -> Result<SpanningLevels> {
    validate_partitions(graph, partitions)?;
    let mut rng_counter = 0u64;
    let stream = HashStream::new(seed, 0x75_7374);

    let mut chosen: Vec<usize> = Vec::new(); // cumulative forest edges
    let mut in_forest = vec![false; graph.edges.len()];
    let mut levels = Vec::with_capacity(partitions.len());
    let mut refined_all = Vec::with_capacity(partitions.len());

    for (li, partition) in partitions.iter().enumerate() {
        let refined = connected_refinement(graph, partition);
        // contract the current forest
        let mut uf = UnionFind::new(graph.n);
        for &e in &chosen {
            uf.union(graph.edges[e].0 as u32, graph.edges[e].1 as u32);
        }
        // group vertices by refined cell
        let n_cells = refined.iter().copied().max().map(|m| m as usize + 1).unwrap_or(0);
        let mut cells: Vec<Vec<usize>> = vec![Vec::new(); n_cells];
        for (v, &c) in refined.iter().enumerate() {
            cells[c as usize].push(v);
        }
        for cell in &cells {
            let new_edges =
                span_cell_contracted(graph, cell, &refined, &mut uf, &stream, &mut rng_counter)?;
            for e in new_edges {
                if !in_forest[e] {
                    in_forest[e] = true;
                    chosen.push(e);
                }
            }
        }
        chosen.sort_unstable();
        levels.push(chosen.clone());
        refined_all.push(refined);
        if li + 1 == partitions.len() && chosen.len() != graph.n - 1 {
            return Err(Error::BadPartitionSequence(
                "final cell is disconnected: no spanning tree exists".into(),
            ));
        }
    }
    Ok(SpanningLevels { levels, refined: refined_all })
}

fn validate_partitions(graph: &SimpleGraph, partitions: &[Vec<u32>]) -> Result<()> {
    if partitions.is_empty() {
        return Err(Error::BadPartitionSequence("empty sequence".into()));
    }
    for p in partitions {
        if p.len() != graph.n {
            return Err(Error::BadPartitionSequence("partition length mismatch".into()));
        }
    }
    // coarsening: same cell at level i implies same cell at level i+1
    for w in partitions.windows(2) {
        let (fine, coarse) = (&w[0], &w[1]);
        let mut image: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        for v in 0..fine.len() {
            match image.get(&fine[v]) {
                None => {
                    image.insert(fine[v], coarse[v]);
                }
                Some(&c) if c == coarse[v] => {}
                Some(_) => {
                    return Err(Error::BadPartitionSequence(
                        "later partition does not coarsen the earlier one".into(),
                    ))
                }
            }
        }
    }
    let last = partitions.last().unwrap();
    if last.iter().any(|&c| c != last[0]) {
        return Err(Error::BadPartitionSequence(
            "final partition must be a single cell".into(),
        ));
    }
    Ok(())
}

/// Split every cell into its connected pieces (the refinement that makes
/// each cell induce a connected subgraph).
pub fn connected_refinement(graph: &SimpleGraph, partition: &[u32]) -> Vec<u32> {
    let mut out = vec![u32::MAX; graph.n];
    let mut next = 0u32;
    for start in 0..graph.n {
        if out[start] != u32::MAX {
            continue;
        }
        let mut stack = vec![start];
        out[start] = next;
        while let Some(v) = stack.pop() {
            for &(w, _) in graph.neighbors(v) {
                if out[w] == u32::MAX && partition[w] == partition[v] {
                    out[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    out
}

/// Uniform spanning tree of one refined cell conditioned to contain the
/// current forest: Wilson's loop-erased walk on the multigraph obtained by
/// contracting the forest inside the cell. Returns the original edge
/// indices of the newly chosen edges.
fn span_cell_contracted(
    graph: &SimpleGraph,
    cell: &[usize],
    refined: &[u32],
    uf: &mut UnionFind,
    stream: &HashStream,
    counter: &mut u64,
) -> Result<Vec<usize>> {
    // supernodes: union-find roots of the cell's vertices
    let mut super_of_root: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    let mut supers: Vec<u32> = Vec::new();
    for &v in cell {
        let r = uf.find(v as u32);
        super_of_root.entry(r).or_insert_with(|| {
            supers.push(r);
            supers.len() - 1
        });
    }
    let k = supers.len();
    if k <= 1 {
        return Ok(Vec::new());
    }
    // contracted multigraph adjacency: (super neighbor, original edge)
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    let cell_id = refined[cell[0]];
    for &v in cell {
        for &(w, e) in graph.neighbors(v) {
            if refined[w] != cell_id || w < v {
                continue; // stay inside the cell; count each edge once
            }
            let (ru, rv) = (uf.find(v as u32), uf.find(w as u32));
            if ru == rv {
                continue; // self-loop after contraction
            }
            let (su, sv) = (super_of_root[&ru], super_of_root[&rv]);
            adj[su].push((sv, e));
            adj[sv].push((su, e));
        }
    }
    // Wilson from an arbitrary root supernode
    let mut in_tree = vec![false; k];
    in_tree[0] = true;
    let mut next_hop: Vec<Option<(usize, usize)>> = vec![None; k];
    let mut new_edges = Vec::new();
    for start in 1..k {
        if in_tree[start] {
            continue;
        }
        let mut u = start;
        while !in_tree[u] {
            if adj[u].is_empty() {
                return Err(Error::BadPartitionSequence(
                    "disconnected induced cell after refinement".into(),
                ));
            }
            let pick = stream.below_at(*counter, adj[u].len() as u64) as usize;
            *counter += 1;
            let (w, e) = adj[u][pick];
            next_hop[u] = Some((w, e));
            u = w;
        }
        let mut v = start;
        while !in_tree[v] {
            in_tree[v] = true;
            let (w, e) = next_hop[v].expect("walked vertex has a hop");
            new_edges.push(e);
            v = w;
        }
    }
    for &e in &new_edges {
        uf.union(graph.edges[e].0 as u32, graph.edges[e].1 as u32);
    }
    Ok(new_edges)
}

/// Uniform spanning tree of a whole graph (single-cell sequence).
pub fn uniform_spanning_tree(graph: &SimpleGraph, seed: u64) -> Result<Vec<usize>> {
    let single = vec![vec![0u32; graph.n]];
    Ok(spanning_tree_from_partitions(graph, &single, seed)?
        .final_tree()
        .to_vec())
}
