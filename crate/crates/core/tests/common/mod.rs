//! Test-side helpers: random instances and an independent rank oracle.
#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use torus_rigidity::document::{parse, OrbitGraphDocument};
use torus_rigidity::graph::{Edge, Gain, GainGraph};
use torus_rigidity::linalg::QMatrix;
use torus_rigidity::torus::{OrbitFramework, Torus};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.orbit"))
}

pub fn fixture(name: &str) -> OrbitGraphDocument {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse(&text).expect("fixture parses")
}

pub fn fixture_framework(name: &str) -> OrbitFramework {
    fixture(name).framework(false).unwrap().expect("fixture has positions")
}

/// Rank by plain fraction-field row reduction.
pub fn oracle_rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in rank + 1..m.len() {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = &m[r][c] / &pivot;
            for k in c..cols {
                let delta = &factor * &m[rank][k];
                m[r][k] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Rigidity matrix rows written out from the definition, independent of the library's builder.
pub fn oracle_rows(f: &OrbitFramework) -> Vec<Vec<Q>> {
    let d = f.dim();
    let n = f.graph().vertex_count();
    let lattice = f.torus().lattice();
    f.graph()
        .edges()
        .iter()
        .map(|e| {
            let mut row = vec![Q::zero(); d * n];
            for k in 0..d {
                let mut shift = Q::zero();
                for (i, g) in e.gain.coords().iter().enumerate() {
                    shift += Q::from_integer(g.clone()) * &lattice[(i, k)];
                }
                let v = &f.position(e.tail)[k] - &f.position(e.head)[k] - shift;
                row[e.tail * d + k] += &v;
                row[e.head * d + k] -= &v;
            }
            row
        })
        .collect()
}

pub fn oracle_framework_rank(f: &OrbitFramework) -> usize {
    oracle_rank(&oracle_rows(f))
}

pub fn binomial2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

pub fn random_gain(rng: &mut ChaCha8Rng, d: usize, range: i64) -> Gain {
    Gain::from_i64s(&(0..d).map(|_| rng.random_range(-range..=range)).collect::<Vec<_>>())
}

/// A connected graph: a random spanning tree plus `extra` random edges (no loops).
pub fn random_connected_graph(rng: &mut ChaCha8Rng, d: usize, n: usize, extra: usize, range: i64) -> GainGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        let (a, b) = if rng.random_bool(0.5) { (u, v) } else { (v, u) };
        edges.push(Edge::new(a, b, random_gain(rng, d, range)));
    }
    for _ in 0..extra {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n);
        while n > 1 && b == a {
            b = rng.random_range(0..n);
        }
        edges.push(Edge::new(a, b, random_gain(rng, d, range)));
    }
    shuffle(rng, &mut edges);
    GainGraph::new(d, n, edges).unwrap()
}

pub fn shuffle<T>(rng: &mut ChaCha8Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

pub fn random_rational(rng: &mut ChaCha8Rng, max_den: i64) -> Q {
    let den = rng.random_range(1..=max_den);
    q(rng.random_range(-2 * den..=2 * den), den)
}

/// An integer lattice, lower triangular or not, with nonzero determinant.
pub fn random_lattice(rng: &mut ChaCha8Rng, d: usize) -> QMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.random_range(-3..=3)).collect()).collect();
        let m = QMatrix::from_i64_rows(&rows);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// Positions with small denominators, resampled until distinct modulo the lattice.
pub fn random_framework(rng: &mut ChaCha8Rng, g: GainGraph, torus: Torus) -> OrbitFramework {
    let d = g.dim();
    loop {
        let p: Vec<Vec<Q>> = (0..g.vertex_count()).map(|_| (0..d).map(|_| random_rational(rng, 97)).collect()).collect();
        if let Ok(f) = OrbitFramework::new(g.clone(), torus.clone(), p) {
            return f;
        }
    }
}

pub fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> QMatrix {
    loop {
        let rows: Vec<Vec<Q>> = (0..d).map(|_| (0..d).map(|_| random_rational(rng, 7)).collect()).collect();
        let m = QMatrix::from_rows(rows);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// `|E| = d(|V| − 1)` and no vertex set spans more than `d(|U| − 1)` edges, by brute force.
pub fn brute_force_maxwell(g: &GainGraph, d: usize) -> bool {
    let n = g.vertex_count();
    if g.edge_count() != d * n.saturating_sub(1) {
        return false;
    }
    (1u32..1 << n).all(|mask| {
        let size = mask.count_ones() as usize;
        let induced = g
            .edges()
            .iter()
            .filter(|e| mask >> e.tail & 1 == 1 && mask >> e.head & 1 == 1)
            .count();
        induced <= d * (size - 1)
    })
}

pub fn is_unit_vector(v: &[Q], k: usize) -> bool {
    v.iter().enumerate().all(|(i, x)| if i == k { x.abs().is_one() } else { x.is_zero() })
}
