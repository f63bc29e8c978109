//! Re-gauging gains along a spanning tree so that tree edges carry zero gain.

use crate::error::{Error, Result};
use crate::graph::{Edge, Gain, GainGraph, RootedTree};
use crate::linalg::{QMatrix, Rat};

/// Net gains of the tree paths from a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPotentials {
    pub root: usize,
    pub tree: Vec<usize>,
    pub potential: Vec<Gain>,
}

pub fn t_potentials(graph: &GainGraph, tree: &[usize], root: usize) -> Result<TPotentials> {
    let rooted = RootedTree::new(graph, tree, root)?;
    Ok(TPotentials {
        root,
        tree: tree.to_vec(),
        potential: rooted.potentials(graph),
    })
}

/// `m_T(e) = potential(tail) + m(e) − potential(head)` for every edge.
pub fn t_gains(graph: &GainGraph, tree: &[usize], root: usize) -> Result<GainGraph> {
    let pot = t_potentials(graph, tree, root)?;
    Ok(apply_potentials(graph, &pot))
}

pub fn apply_potentials(graph: &GainGraph, pot: &TPotentials) -> GainGraph {
    let edges = graph
        .edges()
        .iter()
        .map(|e| {
            let g = &(&pot.potential[e.tail] + &e.gain) - &pot.potential[e.head];
            Edge::new(e.tail, e.head, g)
        })
        .collect();
    GainGraph::new(graph.dim(), graph.vertex_count(), edges).expect("same shape as input")
}

/// T-gains of the non-tree edges for the default spanning tree, rooted at `root`.
pub fn local_gain_generators(graph: &GainGraph, root: usize) -> Result<Vec<Gain>> {
    let tree = graph.spanning_tree()?;
    let relabelled = t_gains(graph, &tree, root)?;
    let mut in_tree = vec![false; graph.edge_count()];
    for &e in &tree {
        in_tree[e] = true;
    }
    Ok(relabelled
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !in_tree[*i])
        .map(|(_, e)| e.gain.clone())
        .collect())
}

/// `p'(v) = p(v) + potential(v)·L` with positions as rows in lattice-scaled coordinates.
pub fn shifted_positions(
    positions: &[Vec<Rat>],
    potentials: &TPotentials,
    lattice: &QMatrix,
) -> Result<Vec<Vec<Rat>>> {
    if positions.len() != potentials.potential.len() {
        return Err(Error::StructureMismatch(format!(
            "{} positions for {} vertices",
            positions.len(),
            potentials.potential.len()
        )));
    }
    positions
        .iter()
        .zip(&potentials.potential)
        .map(|(p, z)| {
            if p.len() != lattice.cols() || z.dim() != lattice.rows() {
                return Err(Error::DimensionMismatch {
                    expected: lattice.rows(),
                    found: p.len(),
                });
            }
            let shift = lattice.vec_mul(&gain_to_rats(z));
            Ok(p.iter().zip(shift).map(|(a, b)| a + b).collect())
        })
        .collect()
}

pub(crate) fn gain_to_rats(g: &Gain) -> Vec<Rat> {
    g.coords().iter().map(|c| Rat::from_integer(c.clone())).collect()
}
