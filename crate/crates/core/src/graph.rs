//! Gain graphs with `ℤ^d` gains: walks, net gains, fundamental cycles, the
//! gain space and periodic equivalence of gain assignments.

use std::collections::VecDeque;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::integer_rank;

/// An element of `ℤ^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gain(Vec<BigInt>);

impl Gain {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn zero(d: usize) -> Self {
        Self(vec![BigInt::zero(); d])
    }

    /// The `i`-th coordinate unit vector.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut g = Self::zero(d);
        g.0[i] = 1.into();
        g
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| c.into()).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Coordinates as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for Gain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Gain {
    type Output = Gain;
    fn add(self, rhs: &Gain) -> Gain {
        debug_assert_eq!(self.dim(), rhs.dim());
        Gain(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Gain {
    type Output = Gain;
    fn sub(self, rhs: &Gain) -> Gain {
        debug_assert_eq!(self.dim(), rhs.dim());
        Gain(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Gain {
    type Output = Gain;
    fn neg(self) -> Gain {
        Gain(self.0.iter().map(|a| -a).collect())
    }
}

/// Directed edge `{tail, head; gain}`; the same edge as `{head, tail; -gain}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub gain: Gain,
}

impl Edge {
    pub fn new(tail: usize, head: usize, gain: Gain) -> Self {
        Self { tail, head, gain }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn reversed(&self) -> Edge {
        Edge::new(self.head, self.tail, -&self.gain)
    }

    /// The endpoint opposite `v` (for a loop, `v` itself).
    pub fn other(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> i32 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// One traversal of an edge, along (`Forward`) or against its stored orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WalkStep {
    pub edge: usize,
    pub direction: Direction,
}

impl WalkStep {
    pub fn forward(edge: usize) -> Self {
        Self {
            edge,
            direction: Direction::Forward,
        }
    }

    pub fn backward(edge: usize) -> Self {
        Self {
            edge,
            direction: Direction::Backward,
        }
    }
}

/// Reverses a walk: steps in opposite order, each traversed the other way.
pub fn reverse_walk(walk: &[WalkStep]) -> Vec<WalkStep> {
    walk.iter()
        .rev()
        .map(|s| WalkStep {
            edge: s.edge,
            direction: s.direction.flip(),
        })
        .collect()
}

/// Finite directed multigraph with `ℤ^d` gains. Loops and parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GainGraph {
    dim: usize,
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl GainGraph {
    pub fn new(dim: usize, vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        for e in &edges {
            for v in [e.tail, e.head] {
                if v >= vertex_count {
                    return Err(Error::VertexIndex {
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            if e.gain.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.gain.dim(),
                });
            }
        }
        Ok(Self {
            dim,
            vertex_count,
            edges,
        })
    }

    /// Convenience constructor from `(tail, head, gain)` triples.
    pub fn from_triples(dim: usize, vertex_count: usize, triples: &[(usize, usize, &[i64])]) -> Result<Self> {
        let edges = triples
            .iter()
            .map(|&(t, h, g)| Edge::new(t, h, Gain::from_i64s(g)))
            .collect();
        Self::new(dim, vertex_count, edges)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Result<&Edge> {
        self.edges.get(index).ok_or(Error::EdgeIndex {
            index,
            count: self.edges.len(),
        })
    }

    /// Same base graph with new gains (one per edge, in edge order).
    pub fn with_gains(&self, gains: Vec<Gain>) -> Result<GainGraph> {
        if gains.len() != self.edges.len() {
            return Err(Error::StructureMismatch(format!(
                "{} gains for {} edges",
                gains.len(),
                self.edges.len()
            )));
        }
        let edges = self
            .edges
            .iter()
            .zip(gains)
            .map(|(e, g)| Edge::new(e.tail, e.head, g))
            .collect();
        GainGraph::new(self.dim, self.vertex_count, edges)
    }

    /// Subgraph on the given edges (vertex set unchanged).
    pub fn edge_subgraph(&self, edges: &[usize]) -> Result<GainGraph> {
        let picked = edges
            .iter()
            .map(|&i| self.edge(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        GainGraph::new(self.dim, self.vertex_count, picked)
    }

    /// Incident `(edge, neighbour)` pairs per vertex, in edge order. A loop
    /// appears once.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.tail].push((i, e.head));
            if !e.is_loop() {
                inc[e.head].push((i, e.tail));
            }
        }
        inc
    }

    /// Vertex sets of connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let inc = self.incidence();
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(_, w) in &inc[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.components().len() == 1
    }

    pub fn ensure_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Breadth-first spanning forest; each component is rooted at its
    /// lowest-numbered vertex and edges are scanned in index order.
    pub fn spanning_forest(&self) -> Vec<usize> {
        let inc = self.incidence();
        let mut seen = vec![false; self.vertex_count];
        let mut tree = Vec::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(e, w) in &inc[v] {
                    if !seen[w] {
                        seen[w] = true;
                        tree.push(e);
                        queue.push_back(w);
                    }
                }
            }
        }
        tree
    }

    /// The default spanning tree (breadth-first from vertex 0).
    pub fn spanning_tree(&self) -> Result<Vec<usize>> {
        self.ensure_connected()?;
        Ok(self.spanning_forest())
    }

    /// Start and end vertex of a step.
    pub fn step_endpoints(&self, step: WalkStep) -> Result<(usize, usize)> {
        let e = self.edge(step.edge)?;
        Ok(match step.direction {
            Direction::Forward => (e.tail, e.head),
            Direction::Backward => (e.head, e.tail),
        })
    }

    /// Gain picked up by a single step.
    pub fn step_gain(&self, step: WalkStep) -> Result<Gain> {
        let e = self.edge(step.edge)?;
        Ok(match step.direction {
            Direction::Forward => e.gain.clone(),
            Direction::Backward => -&e.gain,
        })
    }
}

/// Checks that consecutive steps share a vertex.
pub fn validate_walk(graph: &GainGraph, walk: &[WalkStep]) -> Result<()> {
    let mut prev_end = None;
    for (k, &step) in walk.iter().enumerate() {
        let (start, end) = graph.step_endpoints(step)?;
        if prev_end.is_some_and(|p| p != start) {
            return Err(Error::InvalidWalk { step: k });
        }
        prev_end = Some(end);
    }
    Ok(())
}

/// Net gain `Σ αᵢ m(eᵢ)` of a walk.
pub fn net_gain(graph: &GainGraph, walk: &[WalkStep]) -> Result<Gain> {
    validate_walk(graph, walk)?;
    let mut total = Gain::zero(graph.dim());
    for &step in walk {
        total = &total + &graph.step_gain(step)?;
    }
    Ok(total)
}

/// A spanning tree hung from a root.
#[derive(Clone, Debug)]
pub struct RootedTree {
    root: usize,
    edges: Vec<usize>,
    /// `(tree edge, parent vertex)` for every non-root vertex.
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    /// Vertices in breadth-first order from the root.
    order: Vec<usize>,
}

impl RootedTree {
    /// Validates that `tree` is a spanning tree of `graph` and roots it at `root`.
    pub fn new(graph: &GainGraph, tree: &[usize], root: usize) -> Result<Self> {
        let n = graph.vertex_count();
        if root >= n {
            return Err(Error::VertexIndex {
                vertex: root,
                count: n,
            });
        }
        let mut sorted = tree.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != tree.len() {
            return Err(Error::InvalidTree("repeated edge".into()));
        }
        if tree.len() + 1 != n {
            return Err(Error::InvalidTree(format!(
                "{} edges cannot span {} vertices",
                tree.len(),
                n
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &i in tree {
            let e = graph.edge(i)?;
            if e.is_loop() {
                return Err(Error::InvalidTree(format!("edge {i} is a loop")));
            }
            adj[e.tail].push((i, e.head));
            adj[e.head].push((i, e.tail));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut order = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(e, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((e, v));
                    depth[w] = depth[v] + 1;
                    order.push(w);
                }
            }
        }
        if order.len() != n {
            return Err(Error::InvalidTree("edges do not span the graph".into()));
        }
        Ok(Self {
            root,
            edges: tree.to_vec(),
            parent,
            depth,
            order,
        })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges.contains(&edge)
    }

    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    pub fn parent(&self, v: usize) -> Option<(usize, usize)> {
        self.parent[v]
    }

    /// The unique tree walk from `from` to `to`.
    pub fn path(&self, graph: &GainGraph, from: usize, to: usize) -> Vec<WalkStep> {
        let step_towards = |edge: usize, from_vertex: usize| {
            if graph.edges()[edge].tail == from_vertex {
                WalkStep::forward(edge)
            } else {
                WalkStep::backward(edge)
            }
        };
        let (mut a, mut b) = (from, to);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[a] > self.depth[b] {
            let (e, p) = self.parent[a].expect("non-root has parent");
            up.push(step_towards(e, a));
            a = p;
        }
        while self.depth[b] > self.depth[a] {
            let (e, p) = self.parent[b].expect("non-root has parent");
            down.push(step_towards(e, p));
            b = p;
        }
        while a != b {
            let (ea, pa) = self.parent[a].expect("non-root has parent");
            up.push(step_towards(ea, a));
            a = pa;
            let (eb, pb) = self.parent[b].expect("non-root has parent");
            down.push(step_towards(eb, pb));
            b = pb;
        }
        down.reverse();
        up.extend(down);
        up
    }

    /// Net gain of the tree path from the root to every vertex.
    pub fn potentials(&self, graph: &GainGraph) -> Vec<Gain> {
        let mut pot = vec![Gain::zero(graph.dim()); graph.vertex_count()];
        for &v in &self.order[1..] {
            let (e, p) = self.parent[v].expect("non-root has parent");
            let edge = &graph.edges()[e];
            pot[v] = if edge.tail == p {
                &pot[p] + &edge.gain
            } else {
                &pot[p] - &edge.gain
            };
        }
        pot
    }
}

/// One cycle per non-tree edge: the edge traversed forward, then the tree
/// path from its head back to its tail.
pub fn fundamental_cycles(graph: &GainGraph, tree: &[usize]) -> Result<Vec<Vec<WalkStep>>> {
    graph.ensure_connected()?;
    if graph.vertex_count() == 0 {
        return Ok(Vec::new());
    }
    let rooted = RootedTree::new(graph, tree, 0)?;
    Ok((0..graph.edge_count())
        .filter(|i| !rooted.contains(*i))
        .map(|i| {
            let e = &graph.edges()[i];
            let mut walk = vec![WalkStep::forward(i)];
            walk.extend(rooted.path(graph, e.head, e.tail));
            walk
        })
        .collect())
}

/// Net gains of a fundamental cycle system and their rank over `ℚ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GainSpace {
    pub generators: Vec<Gain>,
    pub rank: usize,
}

pub fn gain_rank(gains: &[Gain]) -> usize {
    let rows: Vec<Vec<BigInt>> = gains
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.coords().to_vec())
        .collect();
    if rows.is_empty() {
        0
    } else {
        integer_rank(rows)
    }
}

/// Gain space of the graph; disconnected graphs contribute the generators of
/// every component.
pub fn gain_space(graph: &GainGraph) -> GainSpace {
    let forest = graph.spanning_forest();
    let pot = forest_potentials(graph, &forest);
    let mut in_forest = vec![false; graph.edge_count()];
    for &e in &forest {
        in_forest[e] = true;
    }
    let generators: Vec<Gain> = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !in_forest[*i])
        .map(|(_, e)| &(&pot[e.tail] + &e.gain) - &pot[e.head])
        .collect();
    let rank = gain_rank(&generators);
    GainSpace { generators, rank }
}

/// Potentials along a spanning forest, zero at each component's least vertex.
pub(crate) fn forest_potentials(graph: &GainGraph, forest: &[usize]) -> Vec<Gain> {
    let n = graph.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &i in forest {
        let e = &graph.edges()[i];
        adj[e.tail].push((i, e.head));
        adj[e.head].push((i, e.tail));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut pot = vec![Gain::zero(graph.dim()); n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(i, w) in &adj[v] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                let e = &graph.edges()[i];
                pot[w] = if e.tail == v {
                    &pot[v] + &e.gain
                } else {
                    &pot[v] - &e.gain
                };
                queue.push_back(w);
            }
        }
    }
    pot
}

/// Outcome of comparing two gain assignments on one base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// `n_e = m_e + ℓ(head) − ℓ(tail)` for every edge, oriented as in the first graph.
    Equivalent { offsets: Vec<Gain> },
    /// A cycle whose net gains differ.
    Inequivalent {
        cycle: Vec<WalkStep>,
        first: Gain,
        second: Gain,
    },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

/// Gains of `other` re-expressed in the stored orientation of `base`.
pub(crate) fn aligned_gains(base: &GainGraph, other: &GainGraph) -> Result<Vec<Gain>> {
    if base.dim() != other.dim() {
        return Err(Error::DimensionMismatch {
            expected: base.dim(),
            found: other.dim(),
        });
    }
    if base.vertex_count() != other.vertex_count() || base.edge_count() != other.edge_count() {
        return Err(Error::StructureMismatch(
            "vertex or edge counts differ".into(),
        ));
    }
    base.edges()
        .iter()
        .zip(other.edges())
        .enumerate()
        .map(|(i, (a, b))| {
            if a.tail == b.tail && a.head == b.head {
                Ok(b.gain.clone())
            } else if a.tail == b.head && a.head == b.tail {
                Ok(-&b.gain)
            } else {
                Err(Error::StructureMismatch(format!(
                    "edge {i} joins different vertices"
                )))
            }
        })
        .collect()
}

/// Decides whether two gain assignments on the same base graph differ by a
/// vertex relabelling, i.e. whether every cycle has the same net gain.
pub fn periodic_equivalent(g1: &GainGraph, g2: &GainGraph) -> Result<Equivalence> {
    let n_gains = aligned_gains(g1, g2)?;
    let forest = g1.spanning_forest();
    let mut in_forest = vec![false; g1.edge_count()];
    for &e in &forest {
        in_forest[e] = true;
    }
    // The offset difference along a tree edge is forced: ℓ(head) − ℓ(tail) = n_e − m_e.
    let diffs: Vec<Gain> = g1
        .edges()
        .iter()
        .zip(&n_gains)
        .map(|(e, n)| n - &e.gain)
        .collect();
    let diff_graph = g1.with_gains(diffs)?;
    let offsets = forest_potentials(&diff_graph, &forest);

    for (i, e) in g1.edges().iter().enumerate() {
        if in_forest[i] {
            continue;
        }
        let ok = if e.is_loop() {
            // A loop is its own reversal, so its gain is only defined up to sign.
            n_gains[i] == e.gain || n_gains[i] == -&e.gain
        } else {
            n_gains[i] == &(&e.gain + &offsets[e.head]) - &offsets[e.tail]
        };
        if !ok {
            let cycle = cycle_through(g1, &forest, i);
            let first = net_gain(g1, &cycle)?;
            let second = net_gain(&g1.with_gains(n_gains.clone())?, &cycle)?;
            return Ok(Equivalence::Inequivalent {
                cycle,
                first,
                second,
            });
        }
    }
    Ok(Equivalence::Equivalent { offsets })
}

/// Cycle formed by a non-forest edge and the forest path closing it.
fn cycle_through(graph: &GainGraph, forest: &[usize], edge: usize) -> Vec<WalkStep> {
    let e = &graph.edges()[edge];
    let mut walk = vec![WalkStep::forward(edge)];
    if e.is_loop() {
        return walk;
    }
    // Restrict to the component holding the edge so the tree is spanning.
    let comps = graph.components();
    let comp = comps
        .iter()
        .find(|c| c.binary_search(&e.tail).is_ok())
        .expect("vertex in some component");
    let mut index = vec![usize::MAX; graph.vertex_count()];
    for (k, &v) in comp.iter().enumerate() {
        index[v] = k;
    }
    let local_edges: Vec<Edge> = graph
        .edges()
        .iter()
        .map(|x| {
            if index[x.tail] != usize::MAX {
                Edge::new(index[x.tail], index[x.head], x.gain.clone())
            } else {
                Edge::new(0, 0, x.gain.clone())
            }
        })
        .collect();
    let local = GainGraph::new(graph.dim(), comp.len(), local_edges).expect("valid relabel");
    let local_tree: Vec<usize> = forest
        .iter()
        .copied()
        .filter(|&f| index[graph.edges()[f].tail] != usize::MAX)
        .collect();
    let rooted = RootedTree::new(&local, &local_tree, 0).expect("forest restricted to a component spans it");
    walk.extend(rooted.path(&local, index[e.head], index[e.tail]));
    walk
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zigzag(m1: &[i64], m2: &[i64]) -> GainGraph {
        GainGraph::from_triples(2, 2, &[(0, 1, m1), (0, 1, m2)]).unwrap()
    }

    fn e1() -> GainGraph {
        GainGraph::from_triples(
            2,
            4,
            &[
                (0, 1, &[0, 0]),
                (1, 2, &[0, 0]),
                (2, 3, &[0, 0]),
                (0, 3, &[0, 0]),
                (2, 0, &[1, 0]),
                (0, 3, &[0, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_vertices_and_dims() {
        assert!(matches!(
            GainGraph::from_triples(2, 2, &[(0, 2, &[0, 0])]),
            Err(Error::VertexIndex { vertex: 2, .. })
        ));
        assert!(matches!(
            GainGraph::from_triples(2, 2, &[(0, 1, &[0, 0, 1])]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert_eq!(GainGraph::new(0, 1, vec![]), Err(Error::ZeroDimension));
    }

    #[test]
    fn net_gain_examples() {
        let g = zigzag(&[1, 0], &[0, 0]);
        assert_eq!(net_gain(&g, &[WalkStep::forward(0)]).unwrap(), Gain::from_i64s(&[1, 0]));
        assert_eq!(
            net_gain(&g, &[WalkStep::forward(0), WalkStep::backward(0)]).unwrap(),
            Gain::zero(2)
        );
    }

    #[test]
    fn net_gain_of_mixed_walk() {
        let g = GainGraph::from_triples(
            2,
            4,
            &[
                (0, 1, &[1, 0]),
                (1, 2, &[0, 1]),
                (3, 2, &[2, 0]),
                (3, 0, &[1, 1]),
            ],
        )
        .unwrap();
        // 0→1→2→3→0 uses edge 2 against its orientation.
        let walk = [
            WalkStep::forward(0),
            WalkStep::forward(1),
            WalkStep::backward(2),
            WalkStep::forward(3),
        ];
        assert_eq!(net_gain(&g, &walk).unwrap(), Gain::from_i64s(&[0, 2]));
        let back = reverse_walk(&walk);
        assert_eq!(net_gain(&g, &back).unwrap(), Gain::from_i64s(&[0, -2]));
    }

    #[test]
    fn net_gain_errors() {
        let g = zigzag(&[1, 0], &[0, 0]);
        assert_eq!(
            net_gain(&g, &[WalkStep::forward(0), WalkStep::forward(1)]),
            Err(Error::InvalidWalk { step: 1 })
        );
        assert!(matches!(
            net_gain(&g, &[WalkStep::forward(7)]),
            Err(Error::EdgeIndex { index: 7, .. })
        ));
    }

    #[test]
    fn fundamental_cycle_counts() {
        let tree = GainGraph::from_triples(2, 3, &[(0, 1, &[1, 0]), (1, 2, &[0, 1])]).unwrap();
        assert!(fundamental_cycles(&tree, &[0, 1]).unwrap().is_empty());

        let zz = zigzag(&[0, 0], &[1, 0]);
        let cycles = fundamental_cycles(&zz, &[0]).unwrap();
        assert_eq!(cycles, vec![vec![WalkStep::forward(1), WalkStep::backward(0)]]);

        let g = e1();
        let cycles = fundamental_cycles(&g, &g.spanning_tree().unwrap()).unwrap();
        assert_eq!(cycles.len(), 6 - 3);
        for c in &cycles {
            validate_walk(&g, c).unwrap();
        }
    }

    #[test]
    fn fundamental_cycle_errors() {
        let g = GainGraph::from_triples(2, 3, &[(0, 1, &[0, 0])]).unwrap();
        assert_eq!(fundamental_cycles(&g, &[0]), Err(Error::Disconnected));
        let zz = zigzag(&[0, 0], &[1, 0]);
        assert!(matches!(fundamental_cycles(&zz, &[0, 1]), Err(Error::InvalidTree(_))));
        let looped = GainGraph::from_triples(1, 2, &[(0, 0, &[1]), (0, 1, &[0])]).unwrap();
        assert!(matches!(fundamental_cycles(&looped, &[0]), Err(Error::InvalidTree(_))));
    }

    #[test]
    fn gain_space_examples() {
        let zero = GainGraph::from_triples(2, 2, &[(0, 1, &[0, 0]), (1, 0, &[0, 0])]).unwrap();
        assert_eq!(gain_space(&zero).rank, 0);

        let zz = zigzag(&[0, 0], &[1, 0]);
        let gs = gain_space(&zz);
        assert_eq!(gs.generators, vec![Gain::from_i64s(&[1, 0])]);
        assert_eq!(gs.rank, 1);

        assert_eq!(gain_space(&e1()).rank, 2);
    }

    #[test]
    fn gain_space_sums_components() {
        let g = GainGraph::from_triples(
            2,
            4,
            &[(0, 1, &[0, 0]), (0, 1, &[1, 0]), (2, 3, &[0, 0]), (2, 3, &[0, 1])],
        )
        .unwrap();
        assert_eq!(gain_space(&g).rank, 2);
    }

    #[test]
    fn equivalence_examples() {
        let g = e1();
        assert_eq!(
            periodic_equivalent(&g, &g).unwrap(),
            Equivalence::Equivalent {
                offsets: vec![Gain::zero(2); 4]
            }
        );

        // Shift vertex 0 by (1,0): edges leaving it gain −(1,0), edges entering gain +(1,0).
        let shift = Gain::from_i64s(&[1, 0]);
        let gains: Vec<Gain> = g
            .edges()
            .iter()
            .map(|e| match (e.tail == 0, e.head == 0) {
                (true, false) => &e.gain - &shift,
                (false, true) => &e.gain + &shift,
                _ => e.gain.clone(),
            })
            .collect();
        let h = g.with_gains(gains).unwrap();
        match periodic_equivalent(&g, &h).unwrap() {
            Equivalence::Equivalent { offsets } => {
                for (e, n) in g.edges().iter().zip(h.edges()) {
                    assert_eq!(n.gain, &(&e.gain + &offsets[e.head]) - &offsets[e.tail]);
                }
                assert_eq!(&offsets[0] - &offsets[1], shift);
            }
            other => panic!("expected equivalence, got {other:?}"),
        }

        let a = zigzag(&[0, 0], &[1, 0]);
        let b = zigzag(&[0, 0], &[0, 0]);
        match periodic_equivalent(&a, &b).unwrap() {
            Equivalence::Inequivalent { first, second, .. } => {
                assert_eq!(first, Gain::from_i64s(&[1, 0]));
                assert_eq!(second, Gain::zero(2));
            }
            other => panic!("expected inequivalence, got {other:?}"),
        }
    }

    #[test]
    fn equivalence_ignores_stored_orientation() {
        let a = zigzag(&[0, 0], &[1, 0]);
        let b = GainGraph::from_triples(2, 2, &[(1, 0, &[0, 0]), (1, 0, &[-1, 0])]).unwrap();
        assert!(periodic_equivalent(&a, &b).unwrap().is_equivalent());
        let c = GainGraph::from_triples(2, 2, &[(0, 1, &[0, 0]), (0, 0, &[1, 0])]).unwrap();
        assert!(matches!(periodic_equivalent(&a, &c), Err(Error::StructureMismatch(_))));
    }

    #[test]
    fn tree_paths_and_potentials() {
        // Triangle 1→2 (1,2), 2→3 (0,1), 3→1 (3,1), 3→1 (1,−1); tree {e1, e4}, root 3.
        let g = GainGraph::from_triples(
            2,
            3,
            &[(0, 1, &[1, 2]), (1, 2, &[0, 1]), (2, 0, &[3, 1]), (2, 0, &[1, -1])],
        )
        .unwrap();
        let t = RootedTree::new(&g, &[0, 3], 2).unwrap();
        let pot = t.potentials(&g);
        assert_eq!(pot[2], Gain::zero(2));
        assert_eq!(pot[0], Gain::from_i64s(&[1, -1]));
        assert_eq!(pot[1], Gain::from_i64s(&[2, 1]));
        for v in 0..3 {
            let walk = t.path(&g, 2, v);
            assert_eq!(net_gain(&g, &walk).unwrap(), pot[v]);
        }
        let walk = t.path(&g, 1, 0);
        assert_eq!(net_gain(&g, &walk).unwrap(), &pot[0] - &pot[1]);
    }
}
