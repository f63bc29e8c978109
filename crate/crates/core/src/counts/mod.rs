//! Counting conditions that every generically rigid orbit graph satisfies.

mod forest;

use std::fmt;

use rayon::prelude::*;

pub use forest::ForestPacking;

use crate::error::{Error, Result};
use crate::graph::{gain_space, Edge, Gain, GainGraph};

/// Brute-force limits for subset enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gates {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for Gates {
    fn default() -> Self {
        Self {
            max_vertices: 12,
            max_edges: 20,
        }
    }
}

/// Ceiling on candidate edge sets examined per vertex subset when an induced
/// subgraph is denser than tight.
pub const TIGHT_SUBSET_BUDGET: u64 = 1_000_000;

/// Violations listed in a report; the total is kept separately.
pub const MAX_LISTED_VIOLATIONS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    Maxwell,
    GainTightness,
    RankGraded,
}

impl Condition {
    pub fn key(self) -> &'static str {
        match self {
            Condition::Maxwell => "maxwell",
            Condition::GainTightness => "gain_tightness",
            Condition::RankGraded => "rank_graded",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// A subgraph breaking a count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// The counted quantity: an edge count, or a gain-space rank for tightness.
    pub measured: i64,
    pub bound: i64,
    pub gain_rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub condition: Condition,
    pub pass: bool,
    pub violations: Vec<Violation>,
    /// Total number of violating subsets; may exceed `violations.len()`.
    pub violation_count: usize,
}

impl CountReport {
    fn from_violations(condition: Condition, mut violations: Vec<Violation>, total: usize) -> Self {
        violations.truncate(MAX_LISTED_VIOLATIONS);
        Self {
            condition,
            pass: total == 0,
            violations,
            violation_count: total,
        }
    }
}

fn binom2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// Largest number of independent edges on `n` vertices whose cycles carry a
/// gain space of rank `k`, in dimension `d`.
///
/// Equals `d·n − C(d+1, 2) + Σ_{i=1..k} (d − i)` once `n ≥ d − k + 1`; for
/// fewer vertices some rotations act trivially and the bound is larger.
pub fn rank_graded_bound(d: usize, n: usize, k: usize) -> i64 {
    let (d, n, k) = (d as i64, n as i64, k as i64);
    let free = (d - k).max(0);
    d * n - d - binom2(free) + binom2((free - n + 1).max(0))
}

/// `C(d,2) − Σ_{i=1..k} (d−i) = C(d−k,2)`, both sides evaluated exactly.
pub fn fact_identity(d: usize, k: usize) -> Result<bool> {
    if k > d {
        return Err(Error::Domain(format!("k = {k} exceeds d = {d}")));
    }
    let (d, k) = (d as i64, k as i64);
    let lhs = binom2(d) - (1..=k).map(|i| d - i).sum::<i64>();
    Ok(lhs == binom2(d - k))
}

/// `d` edge sets, each a spanning tree, together partitioning the edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub trees: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionFailure {
    /// Too few edges for `d` spanning trees.
    Deficient { edges: usize, required: usize },
    /// A vertex set spanning more than `d(|U| − 1)` edges.
    Overdense { vertices: Vec<usize>, edges: usize, bound: usize },
}

impl fmt::Display for DecompositionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionFailure::Deficient { edges, required } => {
                write!(f, "{edges} edges, {required} needed")
            }
            DecompositionFailure::Overdense { vertices, edges, bound } => {
                write!(f, "vertices {vertices:?} span {edges} edges, more than {bound}")
            }
        }
    }
}

impl std::error::Error for DecompositionFailure {}

fn induced_edges(g: &GainGraph, vertices: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.vertex_count()];
    for &v in vertices {
        inside[v] = true;
    }
    (0..g.edge_count())
        .filter(|&i| {
            let e = &g.edges()[i];
            inside[e.tail] && inside[e.head]
        })
        .collect()
}

fn overdense(g: &GainGraph, d: usize, vertices: Vec<usize>) -> DecompositionFailure {
    let edges = induced_edges(g, &vertices).len();
    let bound = d * (vertices.len() - 1);
    DecompositionFailure::Overdense { vertices, edges, bound }
}

/// Splits the edges into `d` edge-disjoint spanning trees, inserting edges in
/// index order.
pub fn tree_decomposition(g: &GainGraph, d: usize) -> std::result::Result<TreeDecomposition, DecompositionFailure> {
    let required = d * g.vertex_count().saturating_sub(1);
    if g.edge_count() < required {
        return Err(DecompositionFailure::Deficient {
            edges: g.edge_count(),
            required,
        });
    }
    let mut packing = ForestPacking::new(g.vertex_count(), d);
    for e in g.edges() {
        if let Err(vertices) = packing.insert(e.tail, e.head) {
            return Err(overdense(g, d, vertices));
        }
    }
    let mut trees = vec![Vec::new(); d];
    for (i, owner) in packing.owners().iter().enumerate() {
        trees[owner.expect("every edge inserted")].push(i);
    }
    Ok(TreeDecomposition { trees })
}

/// Gives tree `i` of a decomposition the gain `e_i`, orienting every edge from
/// its lower to its higher endpoint.
pub fn synthesize_constructive_gains(
    g: &GainGraph,
    d: usize,
) -> std::result::Result<GainGraph, DecompositionFailure> {
    let decomposition = tree_decomposition(g, d)?;
    let mut gains = vec![Gain::zero(d); g.edge_count()];
    for (i, tree) in decomposition.trees.iter().enumerate() {
        for &e in tree {
            gains[e] = Gain::unit(d, i);
        }
    }
    let edges = g
        .edges()
        .iter()
        .zip(gains)
        .map(|(e, gain)| Edge::new(e.tail.min(e.head), e.tail.max(e.head), gain))
        .collect();
    Ok(GainGraph::new(d, g.vertex_count(), edges).expect("d ≥ 1 when a decomposition exists"))
}

/// `|E| = d|V| − d` and `|E'| ≤ d|V'| − d` for every subgraph.
pub fn maxwell_check(g: &GainGraph) -> CountReport {
    maxwell_check_with(g, Gates::default())
}

pub fn maxwell_check_with(g: &GainGraph, gates: Gates) -> CountReport {
    let d = g.dim();
    let n = g.vertex_count();
    let mut violations = Vec::new();
    let target = (d * n.saturating_sub(1)) as i64;
    if g.edge_count() as i64 != target {
        violations.push(Violation {
            vertices: (0..n).collect(),
            edges: (0..g.edge_count()).collect(),
            measured: g.edge_count() as i64,
            bound: target,
            gain_rank: None,
        });
    }
    let mut packing = ForestPacking::new(n, d);
    let mut blocked = None;
    for e in g.edges() {
        if let Err(vertices) = packing.insert(e.tail, e.head) {
            blocked = Some(vertices);
            break;
        }
    }
    if let Some(certificate) = blocked {
        let vertices = if n <= gates.max_vertices {
            densest_vertex_set(g, d)
        } else {
            certificate
        };
        let edges = induced_edges(g, &vertices);
        violations.push(Violation {
            bound: (d * (vertices.len() - 1)) as i64,
            measured: edges.len() as i64,
            vertices,
            edges,
            gain_rank: None,
        });
    }
    let total = violations.len();
    CountReport::from_violations(Condition::Maxwell, violations, total)
}

/// Vertex set maximising `|E(U)| − d(|U| − 1)`; ties go to fewer vertices,
/// then to the smaller bitmask.
fn densest_vertex_set(g: &GainGraph, d: usize) -> Vec<usize> {
    let n = g.vertex_count();
    let ends: Vec<u32> = g.edges().iter().map(|e| (1u32 << e.tail) | (1u32 << e.head)).collect();
    let best = (1u32..1u32 << n)
        .map(|mask| {
            let edges = ends.iter().filter(|&&b| b & mask == b).count() as i64;
            let size = mask.count_ones() as i64;
            (edges - d as i64 * (size - 1), -size, std::cmp::Reverse(mask))
        })
        .max()
        .map(|(_, _, std::cmp::Reverse(mask))| mask)
        .unwrap_or(0);
    (0..n).filter(|v| best >> v & 1 == 1).collect()
}

fn subset_gain_rank(g: &GainGraph, edges: &[usize]) -> usize {
    let sub = g.edge_subgraph(edges).expect("indices come from the graph");
    gain_space(&sub).rank
}

fn mask_to_vec(mask: u64, len: usize) -> Vec<usize> {
    (0..len).filter(|i| mask >> i & 1 == 1).collect()
}

/// Every subgraph `G'` with `|E'| = d|V'| − d` has gain-space rank at least `d − 1`.
pub fn gain_tightness_check(g: &GainGraph) -> Result<CountReport> {
    gain_tightness_check_with(g, Gates::default())
}

pub fn gain_tightness_check_with(g: &GainGraph, gates: Gates) -> Result<CountReport> {
    let n = g.vertex_count();
    if n > gates.max_vertices {
        return Err(Error::GateExceeded {
            what: "vertex count",
            actual: n,
            gate: gates.max_vertices,
        });
    }
    let d = g.dim();
    let needed = d - 1;
    let results = (1u64..1u64 << n)
        .into_par_iter()
        .filter(|mask| mask.count_ones() >= 2)
        .map(|mask| -> Result<Vec<Violation>> {
            let vertices = mask_to_vec(mask, n);
            let target = d * (vertices.len() - 1);
            let induced = induced_edges(g, &vertices);
            let mut found = Vec::new();
            let mut visit = |subset: &[usize]| {
                if !covers(g, subset, &vertices) {
                    return;
                }
                let rank = subset_gain_rank(g, subset);
                if rank < needed {
                    found.push(Violation {
                        vertices: vertices.clone(),
                        edges: subset.to_vec(),
                        measured: rank as i64,
                        bound: needed as i64,
                        gain_rank: Some(rank),
                    });
                }
            };
            if induced.len() == target {
                visit(&induced);
            } else if induced.len() > target {
                let count = binomial(induced.len() as u64, target as u64);
                if count > TIGHT_SUBSET_BUDGET {
                    return Err(Error::GateExceeded {
                        what: "tight edge subsets per vertex set",
                        actual: count.min(usize::MAX as u64) as usize,
                        gate: TIGHT_SUBSET_BUDGET as usize,
                    });
                }
                for_each_combination(&induced, target, &mut visit);
            }
            Ok(found)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut violations: Vec<Violation> = results.into_iter().flatten().collect();
    violations.sort_by(|a, b| (a.edges.len(), &a.edges).cmp(&(b.edges.len(), &b.edges)));
    let total = violations.len();
    Ok(CountReport::from_violations(Condition::GainTightness, violations, total))
}

fn covers(g: &GainGraph, edges: &[usize], vertices: &[usize]) -> bool {
    let mut hit = vec![false; g.vertex_count()];
    for &i in edges {
        let e = &g.edges()[i];
        hit[e.tail] = true;
        hit[e.head] = true;
    }
    vertices.iter().all(|&v| hit[v])
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

fn for_each_combination(items: &[usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if chosen.len() == k {
            visit(chosen);
            return;
        }
        let remaining = k - chosen.len();
        for i in start..=items.len() - remaining {
            chosen.push(items[i]);
            rec(items, k, i + 1, chosen, visit);
            chosen.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), visit);
}

/// `|Y| ≤ rank_graded_bound(d, |V(Y)|, rank gs(Y))` for every nonempty
/// connected edge subset `Y`.
pub fn rank_graded_sparsity_check(g: &GainGraph) -> Result<CountReport> {
    rank_graded_sparsity_check_with(g, Gates::default())
}

pub fn rank_graded_sparsity_check_with(g: &GainGraph, gates: Gates) -> Result<CountReport> {
    rank_graded_scan(g, gates, true)
}

/// Same inequality over all nonempty edge subsets, connected or not.
pub fn rank_graded_sparsity_check_all_subsets(g: &GainGraph, gates: Gates) -> Result<CountReport> {
    rank_graded_scan(g, gates, false)
}

fn rank_graded_scan(g: &GainGraph, gates: Gates, connected_only: bool) -> Result<CountReport> {
    let m = g.edge_count();
    if m > gates.max_edges || m > 40 {
        return Err(Error::GateExceeded {
            what: "edge count",
            actual: m,
            gate: gates.max_edges.min(40),
        });
    }
    if g.vertex_count() > 64 {
        return Err(Error::GateExceeded {
            what: "vertex count",
            actual: g.vertex_count(),
            gate: 64,
        });
    }
    let d = g.dim();
    let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.tail, e.head)).collect();
    let ends_mask: Vec<u64> = ends.iter().map(|&(a, b)| (1u64 << a) | (1u64 << b)).collect();
    let base_bound: Vec<i64> = (0..=g.vertex_count()).map(|n| rank_graded_bound(d, n, 0)).collect();

    let mut found: Vec<(u64, Violation)> = (1u64..1u64 << m)
        .into_par_iter()
        .filter_map(|mask| {
            let size = mask.count_ones() as i64;
            let mut vmask = 0u64;
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                vmask |= ends_mask[i];
                bits &= bits - 1;
            }
            let n = vmask.count_ones() as usize;
            if size <= base_bound[n] {
                return None;
            }
            if connected_only && !edge_set_connected(mask, &ends) {
                return None;
            }
            let edges = mask_to_vec(mask, m);
            let k = subset_gain_rank(g, &edges);
            let bound = rank_graded_bound(d, n, k);
            (size > bound).then(|| {
                (
                    mask,
                    Violation {
                        vertices: mask_to_vec(vmask, g.vertex_count()),
                        edges,
                        measured: size,
                        bound,
                        gain_rank: Some(k),
                    },
                )
            })
        })
        .collect();
    found.sort_by_key(|(mask, _)| (mask.count_ones(), *mask));
    let total = found.len();
    let violations = found.into_iter().map(|(_, v)| v).collect();
    Ok(CountReport::from_violations(Condition::RankGraded, violations, total))
}

fn edge_set_connected(mask: u64, ends: &[(usize, usize)]) -> bool {
    let first = mask.trailing_zeros() as usize;
    let mut reached = (1u64 << ends[first].0) | (1u64 << ends[first].1);
    let mut pending = mask & !(1u64 << first);
    loop {
        let mut grew = false;
        let mut bits = pending;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (a, b) = ends[i];
            if reached >> a & 1 == 1 || reached >> b & 1 == 1 {
                reached |= (1u64 << a) | (1u64 << b);
                pending &= !(1u64 << i);
                grew = true;
            }
        }
        if pending == 0 {
            return true;
        }
        if !grew {
            return false;
        }
    }
}
