//! The fixed-torus rigidity matrix, its rank, flexes and stresses.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::GainGraph;
use crate::linalg::{dot, float_rank, gram_schmidt, QMatrix, Rat};
use crate::torus::{OrbitFramework, Torus};

/// Relative singular-value cutoff for floating-point rank.
pub const FLOAT_RANK_TOL: f64 = 1e-9;

/// Denominator of sampled coordinates (the Mersenne prime `2³¹ − 1`).
pub const SAMPLE_DENOMINATOR: i64 = 2_147_483_647;

pub const DEFAULT_TRIALS: usize = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Arithmetic {
    #[default]
    Exact,
    Float,
}

/// `|E| × d|V|` matrix with one row per edge and `d` columns per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityMatrix {
    pub entries: QMatrix,
    pub row_edges: Vec<usize>,
    pub dim: usize,
    pub vertex_count: usize,
}

impl RigidityMatrix {
    /// Exact rank.
    pub fn rank(&self) -> usize {
        self.entries.rank()
    }

    pub fn float_rank(&self) -> usize {
        float_rank(&self.entries.to_f64_rows(), FLOAT_RANK_TOL)
    }

    pub fn rank_with(&self, arithmetic: Arithmetic) -> usize {
        match arithmetic {
            Arithmetic::Exact => self.rank(),
            Arithmetic::Float => self.float_rank(),
        }
    }

    /// The `d` entries of `row` in the block of `vertex`.
    pub fn block(&self, row: usize, vertex: usize) -> &[Rat] {
        &self.entries.row(row)[vertex * self.dim..(vertex + 1) * self.dim]
    }

    /// `d|V| − d`.
    pub fn target_rank(&self) -> usize {
        target_rank(self.dim, self.vertex_count)
    }
}

pub fn target_rank(d: usize, n: usize) -> usize {
    (d * n).saturating_sub(d)
}

/// Row for `{i, j; m}` holds `p_i − (p_j + m·L)` in block `i` and its
/// negative in block `j`; loop rows cancel to zero.
pub fn build_rigidity_matrix(f: &OrbitFramework) -> Result<RigidityMatrix> {
    let g = f.graph();
    g.ensure_connected()?;
    let d = g.dim();
    let mut entries = QMatrix::zeros(g.edge_count(), d * g.vertex_count());
    for (r, e) in g.edges().iter().enumerate() {
        let v = f.edge_vector(e.tail, e.head, &e.gain);
        let row = entries.row_mut(r);
        for k in 0..d {
            row[e.tail * d + k] += &v[k];
            row[e.head * d + k] -= &v[k];
        }
    }
    Ok(RigidityMatrix {
        entries,
        row_edges: (0..g.edge_count()).collect(),
        dim: d,
        vertex_count: g.vertex_count(),
    })
}

pub fn rigidity_rank(f: &OrbitFramework, arithmetic: Arithmetic) -> Result<usize> {
    Ok(build_rigidity_matrix(f)?.rank_with(arithmetic))
}

/// Rank equals `d|V| − d`.
pub fn is_infinitesimally_rigid(f: &OrbitFramework) -> Result<bool> {
    let m = build_rigidity_matrix(f)?;
    Ok(m.rank() == m.target_rank())
}

/// The `d` coordinate translations, each as a `d·n` velocity vector.
pub fn trivial_motion_basis(d: usize, n: usize) -> Vec<Vec<Rat>> {
    (0..d)
        .map(|k| {
            let mut u = vec![Rat::zero(); d * n];
            for v in 0..n {
                u[v * d + k] = Rat::from_integer(1.into());
            }
            u
        })
        .collect()
}

/// Infinitesimal motions orthogonal to all translations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlexBasis {
    pub vectors: Vec<Vec<Rat>>,
}

impl FlexBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }
}

/// Row dependencies `ω` with `ω·R₀ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StressBasis {
    pub vectors: Vec<Vec<Rat>>,
}

impl StressBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }
}

pub fn flex_basis(f: &OrbitFramework) -> Result<FlexBasis> {
    Ok(flex_basis_of(&build_rigidity_matrix(f)?))
}

pub fn flex_basis_of(m: &RigidityMatrix) -> FlexBasis {
    let kernel = m.entries.nullspace();
    let translations = trivial_motion_basis(m.dim, m.vertex_count);
    FlexBasis {
        vectors: gram_schmidt(&kernel, &translations),
    }
}

pub fn stress_basis(f: &OrbitFramework) -> Result<StressBasis> {
    Ok(stress_basis_of(&build_rigidity_matrix(f)?))
}

pub fn stress_basis_of(m: &RigidityMatrix) -> StressBasis {
    StressBasis {
        vectors: m.entries.left_nullspace(),
    }
}

/// Checks `(u_i − u_j)·(p_i − p_j − m·L) = 0` on every edge.
pub fn is_infinitesimal_motion(f: &OrbitFramework, u: &[Rat]) -> bool {
    let d = f.dim();
    if u.len() != d * f.graph().vertex_count() {
        return false;
    }
    f.graph().edges().iter().all(|e| {
        let diff: Vec<Rat> = (0..d).map(|k| &u[e.tail * d + k] - &u[e.head * d + k]).collect();
        dot(&diff, &f.edge_vector(e.tail, e.head, &e.gain)).is_zero()
    })
}

/// Positions with coordinates `k / (2³¹ − 1)`, `k` uniform in `[0, 2³¹)`.
pub fn sample_positions(n: usize, d: usize, seed: u64, trial: u64) -> Vec<Vec<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let den = BigInt::from(SAMPLE_DENOMINATOR);
    (0..n)
        .map(|_| {
            (0..d)
                .map(|_| Rat::new(BigInt::from(rng.random_range(0..1u64 << 31)), den.clone()))
                .collect()
        })
        .collect()
}

/// Framework on the unit torus at sampled positions.
pub fn sample_framework(g: &GainGraph, seed: u64, trial: u64) -> Result<OrbitFramework> {
    let p = sample_positions(g.vertex_count(), g.dim(), seed, trial);
    OrbitFramework::new_degenerate(g.clone(), Torus::unit(g.dim()), p)
}

/// Maximum rank over `trials` sampled realizations.
pub fn generic_rank(g: &GainGraph, trials: usize, seed: u64) -> Result<usize> {
    generic_rank_with(g, trials, seed, Arithmetic::Exact)
}

pub fn generic_rank_with(g: &GainGraph, trials: usize, seed: u64, arithmetic: Arithmetic) -> Result<usize> {
    g.ensure_connected()?;
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let ranks = (0..trials as u64)
        .into_par_iter()
        .map(|t| rigidity_rank(&sample_framework(g, seed, t)?, arithmetic))
        .collect::<Result<Vec<_>>>()?;
    Ok(ranks.into_iter().max().unwrap_or(0))
}
