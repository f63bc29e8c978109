//! Finite windows of the periodic framework covering an orbit framework.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{dot, Rat};
use crate::torus::OrbitFramework;

/// Upper limit on the number of cells in a window.
pub const MAX_WINDOW_CELLS: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowVertex {
    pub vertex: usize,
    pub cell: Vec<i64>,
    /// `p(v) + z·L`.
    pub position: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowEdge {
    pub edge: usize,
    pub cell: Vec<i64>,
    /// Index of `(tail, z)` in the window's vertex list.
    pub from: usize,
    /// Index of `(head, z + m)`.
    pub to: usize,
}

/// The part of the derived framework whose cells lie in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedWindow {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    /// Ordered by cell (lexicographically), then by vertex.
    pub vertices: Vec<WindowVertex>,
    /// Ordered by cell, then by edge.
    pub edges: Vec<WindowEdge>,
}

impl DerivedWindow {
    /// Index of `(vertex, cell)` in `vertices`, if the cell is inside the box.
    pub fn index_of(&self, vertex: usize, cell: &[i64], vertex_count: usize) -> Option<usize> {
        cell_index(&self.lo, &self.hi, cell).map(|c| c * vertex_count + vertex)
    }
}

fn cell_index(lo: &[i64], hi: &[i64], cell: &[i64]) -> Option<usize> {
    let mut index = 0usize;
    for k in 0..lo.len() {
        if cell[k] < lo[k] || cell[k] > hi[k] {
            return None;
        }
        let width = (hi[k] - lo[k] + 1) as usize;
        index = index * width + (cell[k] - lo[k]) as usize;
    }
    Some(index)
}

fn cells(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for k in 0..lo.len() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo[k]..=hi[k]).map(move |x| {
                    let mut c = prefix.clone();
                    c.push(x);
                    c
                })
            })
            .collect();
    }
    out
}

pub fn expand_window(f: &OrbitFramework, lo: &[i64], hi: &[i64]) -> Result<DerivedWindow> {
    let d = f.dim();
    for bound in [lo, hi] {
        if bound.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bound.len(),
            });
        }
    }
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Err(Error::Domain("window is empty: lo exceeds hi".into()));
    }
    let count = lo
        .iter()
        .zip(hi)
        .try_fold(1u64, |acc, (a, b)| acc.checked_mul((b - a + 1) as u64))
        .filter(|&c| c <= MAX_WINDOW_CELLS)
        .ok_or_else(|| Error::Domain(format!("window exceeds {MAX_WINDOW_CELLS} cells")))?;
    let n = f.graph().vertex_count();
    let all_cells = cells(lo, hi);
    debug_assert_eq!(all_cells.len() as u64, count);

    let mut vertices = Vec::with_capacity(all_cells.len() * n);
    for z in &all_cells {
        let shift = f.torus().lattice().vec_mul(&to_rats(z));
        for v in 0..n {
            let position = f.position(v).iter().zip(&shift).map(|(p, s)| p + s).collect();
            vertices.push(WindowVertex {
                vertex: v,
                cell: z.clone(),
                position,
            });
        }
    }
    let gains: Vec<Option<Vec<i64>>> = f.graph().edges().iter().map(|e| e.gain.to_i64s()).collect();
    let mut edges = Vec::new();
    for (c, z) in all_cells.iter().enumerate() {
        for (i, e) in f.graph().edges().iter().enumerate() {
            let Some(m) = &gains[i] else { continue };
            let Some(target) = z.iter().zip(m).map(|(a, b)| a.checked_add(*b)).collect::<Option<Vec<i64>>>() else {
                continue;
            };
            if let Some(tc) = cell_index(lo, hi, &target) {
                edges.push(WindowEdge {
                    edge: i,
                    cell: z.clone(),
                    from: c * n + e.tail,
                    to: tc * n + e.head,
                });
            }
        }
    }
    Ok(DerivedWindow {
        lo: lo.to_vec(),
        hi: hi.to_vec(),
        vertices,
        edges,
    })
}

fn to_rats(z: &[i64]) -> Vec<Rat> {
    z.iter().map(|&x| Rat::from_integer(x.into())).collect()
}

/// Squared lengths of the copies `(e, z)` of an edge, exact.
pub fn fiber_edge_lengths(f: &OrbitFramework, edge: usize, cells: &[Vec<i64>]) -> Result<Vec<Rat>> {
    let e = f.graph().edge(edge)?.clone();
    let lattice = f.torus().lattice();
    let m = e.gain.coords().iter().map(|c| Rat::from_integer(c.clone())).collect::<Vec<_>>();
    cells
        .iter()
        .map(|z| {
            if z.len() != f.dim() {
                return Err(Error::DimensionMismatch {
                    expected: f.dim(),
                    found: z.len(),
                });
            }
            let zr = to_rats(z);
            let zm: Vec<Rat> = zr.iter().zip(&m).map(|(a, b)| a + b).collect();
            let a: Vec<Rat> = f.position(e.tail).iter().zip(lattice.vec_mul(&zr)).map(|(p, s)| p + s).collect();
            let b: Vec<Rat> = f.position(e.head).iter().zip(lattice.vec_mul(&zm)).map(|(p, s)| p + s).collect();
            let diff: Vec<Rat> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
            Ok(dot(&diff, &diff))
        })
        .collect()
}

/// Velocity of each window vertex: the orbit velocity of its vertex.
pub fn lift_flex(u: &[Rat], window: &DerivedWindow, d: usize) -> Result<Vec<Vec<Rat>>> {
    window
        .vertices
        .iter()
        .map(|w| {
            let start = w.vertex * d;
            u.get(start..start + d).map(<[Rat]>::to_vec).ok_or(Error::DimensionMismatch {
                expected: start + d,
                found: u.len(),
            })
        })
        .collect()
}

/// `(p_a − p_b)·(u_a − u_b) = 0` on every window edge.
pub fn satisfies_window_constraints(window: &DerivedWindow, velocities: &[Vec<Rat>]) -> bool {
    window.edges.iter().all(|e| {
        let (a, b) = (&window.vertices[e.from], &window.vertices[e.to]);
        let dp: Vec<Rat> = a.position.iter().zip(&b.position).map(|(x, y)| x - y).collect();
        let du: Vec<Rat> = velocities[e.from].iter().zip(&velocities[e.to]).map(|(x, y)| x - y).collect();
        dot(&dp, &du).is_zero()
    })
}
