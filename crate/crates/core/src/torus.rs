//! Lattices, the quotient torus, and frameworks placed on it.

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{aligned_gains, Gain, GainGraph};
use crate::linalg::{dot, rat_to_f64, QMatrix, Rat};
use crate::tgain::gain_to_rats;

/// `ℝ^d / ℤ^d L`, where the rows of `L` are the generating translations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torus {
    lattice: QMatrix,
    inverse: QMatrix,
}

impl Torus {
    pub fn new(lattice: QMatrix) -> Result<Self> {
        if lattice.rows() == 0 {
            return Err(Error::ZeroDimension);
        }
        if lattice.rows() != lattice.cols() {
            return Err(Error::DimensionMismatch {
                expected: lattice.rows(),
                found: lattice.cols(),
            });
        }
        let inverse = lattice.inverse().ok_or(Error::SingularLattice)?;
        Ok(Self { lattice, inverse })
    }

    pub fn unit(d: usize) -> Self {
        Self {
            lattice: QMatrix::identity(d),
            inverse: QMatrix::identity(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.lattice.rows()
    }

    pub fn lattice(&self) -> &QMatrix {
        &self.lattice
    }

    pub fn inverse(&self) -> &QMatrix {
        &self.inverse
    }

    pub fn is_unit(&self) -> bool {
        self.lattice == QMatrix::identity(self.dim())
    }

    /// Lower triangular with positive diagonal.
    pub fn is_normalized(&self) -> bool {
        self.lattice.is_lower_triangular()
            && (0..self.dim()).all(|i| self.lattice[(i, i)].is_positive())
    }

    /// `z·L` for an integer translation `z`.
    pub fn translate(&self, z: &Gain) -> Vec<Rat> {
        self.lattice.vec_mul(&gain_to_rats(z))
    }

    /// Coordinates of `x` in the lattice basis, `x·L⁻¹`.
    pub fn to_cell_coords(&self, x: &[Rat]) -> Vec<Rat> {
        self.inverse.vec_mul(x)
    }
}

/// Output of [`normalize_lattice`].
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeNormalization {
    /// Orthogonal with determinant +1.
    pub rotation: Vec<Vec<f64>>,
    /// `L̃ Rᵀ`: each generator rotated by `R`; lower triangular.
    pub lower: Vec<Vec<f64>>,
    /// Set when `det L̃ < 0`: no rotation gives a positive diagonal, so the
    /// last diagonal entry stays negative.
    pub reflected: bool,
}

const NORMALIZE_TOL: f64 = 1e-12;

/// Rotates the lattice generators into lower-triangular form.
///
/// The rotation acts on each generator (row) of `L̃`, so the lattice itself is
/// rotated rather than re-based: `L₀ = L̃ Rᵀ`.
pub fn normalize_lattice(lattice: &[Vec<f64>]) -> Result<LatticeNormalization> {
    let d = lattice.len();
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if let Some(row) = lattice.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: row.len(),
        });
    }
    let l = DMatrix::from_fn(d, d, |i, j| lattice[i][j]);
    let scale = l.amax().max(f64::MIN_POSITIVE);
    if l.determinant().abs() <= NORMALIZE_TOL * scale.powi(d as i32) {
        return Err(Error::SingularLattice);
    }
    // Lᵀ = Q U, so L Q = Uᵀ and R = Qᵀ.
    let qr = l.transpose().qr();
    let mut q = qr.q();
    let mut u = qr.r();
    for i in 0..d {
        if u[(i, i)] < 0.0 {
            q.column_mut(i).neg_mut();
            u.row_mut(i).neg_mut();
        }
    }
    let reflected = q.determinant() < 0.0;
    if reflected {
        q.column_mut(d - 1).neg_mut();
        u.row_mut(d - 1).neg_mut();
    }
    let mut lower = u.transpose();
    for i in 0..d {
        for j in i + 1..d {
            if lower[(i, j)].abs() > NORMALIZE_TOL * scale {
                return Err(Error::Domain(format!(
                    "triangularisation residue {} exceeds tolerance",
                    lower[(i, j)]
                )));
            }
            lower[(i, j)] = 0.0;
        }
    }
    let rotation = q.transpose();
    let to_rows = |m: &DMatrix<f64>| (0..d).map(|i| (0..d).map(|j| m[(i, j)]).collect()).collect();
    Ok(LatticeNormalization {
        rotation: to_rows(&rotation),
        lower: to_rows(&lower),
        reflected,
    })
}

/// A gain graph with vertex positions on a torus.
///
/// Positions are points of `ℝ^d` in the same coordinates as the lattice rows;
/// only their classes modulo the lattice matter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitFramework {
    graph: GainGraph,
    torus: Torus,
    positions: Vec<Vec<Rat>>,
    degenerate: bool,
}

impl OrbitFramework {
    /// Rejects positions that coincide on the torus.
    pub fn new(graph: GainGraph, torus: Torus, positions: Vec<Vec<Rat>>) -> Result<Self> {
        let f = Self::build(graph, torus, positions)?;
        if let Some((i, j)) = f.coincident_pair() {
            return Err(Error::CoincidentPositions(i, j));
        }
        Ok(f)
    }

    /// Accepts coincident positions; ranks computed from such a framework are
    /// geometric rather than generic.
    pub fn new_degenerate(graph: GainGraph, torus: Torus, positions: Vec<Vec<Rat>>) -> Result<Self> {
        let mut f = Self::build(graph, torus, positions)?;
        f.degenerate = f.coincident_pair().is_some();
        Ok(f)
    }

    fn build(graph: GainGraph, torus: Torus, positions: Vec<Vec<Rat>>) -> Result<Self> {
        if graph.dim() != torus.dim() {
            return Err(Error::DimensionMismatch {
                expected: graph.dim(),
                found: torus.dim(),
            });
        }
        if positions.len() != graph.vertex_count() {
            return Err(Error::StructureMismatch(format!(
                "{} positions for {} vertices",
                positions.len(),
                graph.vertex_count()
            )));
        }
        if let Some(p) = positions.iter().find(|p| p.len() != graph.dim()) {
            return Err(Error::DimensionMismatch {
                expected: graph.dim(),
                found: p.len(),
            });
        }
        Ok(Self {
            graph,
            torus,
            positions,
            degenerate: false,
        })
    }

    pub fn graph(&self) -> &GainGraph {
        &self.graph
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn positions(&self) -> &[Vec<Rat>] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> &[Rat] {
        &self.positions[v]
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    /// True when two vertices share a point of the torus.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Replaces the gains, keeping positions and torus.
    pub fn with_graph(&self, graph: GainGraph) -> Result<Self> {
        let mut f = Self::build(graph, self.torus.clone(), self.positions.clone())?;
        f.degenerate = self.degenerate;
        Ok(f)
    }

    /// Positions reduced into the unit cell, in lattice coordinates.
    pub fn cell_coords(&self) -> Vec<Vec<Rat>> {
        self.positions
            .iter()
            .map(|p| self.torus.to_cell_coords(p).into_iter().map(|x| fract(&x)).collect())
            .collect()
    }

    fn coincident_pair(&self) -> Option<(usize, usize)> {
        let cells = self.cell_coords();
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by(|&a, &b| cells[a].cmp(&cells[b]).then(a.cmp(&b)));
        order
            .windows(2)
            .find(|w| cells[w[0]] == cells[w[1]])
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    /// `p_i − (p_j + m·L)`.
    pub fn edge_vector(&self, i: usize, j: usize, m: &Gain) -> Vec<Rat> {
        let shift = self.torus.translate(m);
        self.positions[i]
            .iter()
            .zip(&self.positions[j])
            .zip(shift)
            .map(|((a, b), s)| a - b - s)
            .collect()
    }
}

/// Fractional part in `[0, 1)`.
pub fn fract(x: &Rat) -> Rat {
    x - Rat::from_integer(x.floor().to_integer())
}

/// Squared length `‖p_i − (p_j + m·L)‖²`, exact.
pub fn edge_length_squared(f: &OrbitFramework, i: usize, j: usize, m: &Gain) -> Result<Rat> {
    check_vertex(f, i)?;
    check_vertex(f, j)?;
    if m.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: m.dim(),
        });
    }
    let v = f.edge_vector(i, j, m);
    Ok(dot(&v, &v))
}

/// `‖p_i − (p_j + m·L)‖`. The order of `i` and `j` matters.
pub fn edge_length(f: &OrbitFramework, i: usize, j: usize, m: &Gain) -> Result<f64> {
    edge_length_squared(f, i, j, m).map(|s| rat_to_f64(&s).sqrt())
}

fn check_vertex(f: &OrbitFramework, v: usize) -> Result<()> {
    if v < f.graph().vertex_count() {
        Ok(())
    } else {
        Err(Error::VertexIndex {
            vertex: v,
            count: f.graph().vertex_count(),
        })
    }
}

/// The same framework after the affine map sending the lattice to the identity.
pub fn to_unit_torus(f: &OrbitFramework) -> OrbitFramework {
    let positions = f
        .positions()
        .iter()
        .map(|p| f.torus().to_cell_coords(p))
        .collect();
    OrbitFramework {
        graph: f.graph().clone(),
        torus: Torus::unit(f.dim()),
        positions,
        degenerate: f.degenerate,
    }
}

/// Image under `x ↦ x·B + t`, on the torus generated by `L·B`.
pub fn affine_image(f: &OrbitFramework, b: &QMatrix, t: &[Rat]) -> Result<OrbitFramework> {
    let d = f.dim();
    if b.rows() != d || b.cols() != d || t.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: b.rows(),
        });
    }
    let torus = Torus::new(f.torus().lattice().mul(b))?;
    let positions = f
        .positions()
        .iter()
        .map(|p| b.vec_mul(p).into_iter().zip(t).map(|(x, s)| x + s).collect())
        .collect();
    let mut out = OrbitFramework::build(f.graph().clone(), torus, positions)?;
    out.degenerate = f.degenerate;
    Ok(out)
}

/// Translation and vertex offsets relating two congruent frameworks on the unit torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceWitness {
    /// `t` with `q_i = p_i + t − ℓ_i`.
    pub translation: Vec<Rat>,
    /// `ℓ_i`, with `n_e = m_e + ℓ(head) − ℓ(tail)`.
    pub offsets: Vec<Gain>,
}

/// Decides whether two frameworks on the same labelled graph differ by a
/// translation of the torus, after both are reduced to the unit torus.
pub fn congruent(f1: &OrbitFramework, f2: &OrbitFramework) -> Result<Option<CongruenceWitness>> {
    let n_gains = aligned_gains(f1.graph(), f2.graph())?;
    let a = to_unit_torus(f1);
    let b = to_unit_torus(f2);
    let d = a.dim();
    if a.graph().vertex_count() == 0 {
        return Ok(Some(CongruenceWitness {
            translation: vec![Rat::zero(); d],
            offsets: Vec::new(),
        }));
    }
    let translation: Vec<Rat> = b.position(0).iter().zip(a.position(0)).map(|(q, p)| q - p).collect();
    let mut offsets = Vec::with_capacity(a.graph().vertex_count());
    for (p, q) in a.positions().iter().zip(b.positions()) {
        let mut ell = Vec::with_capacity(d);
        for k in 0..d {
            let x = &p[k] + &translation[k] - &q[k];
            if !x.is_integer() {
                return Ok(None);
            }
            ell.push(x.to_integer());
        }
        offsets.push(Gain::new(ell));
    }
    for (e, n) in a.graph().edges().iter().zip(&n_gains) {
        let ok = if e.is_loop() {
            *n == e.gain || *n == -&e.gain
        } else {
            *n == &(&e.gain + &offsets[e.head]) - &offsets[e.tail]
        };
        if !ok {
            return Ok(None);
        }
    }
    Ok(Some(CongruenceWitness {
        translation,
        offsets,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Gain;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn pt(coords: &[(i64, i64)]) -> Vec<Rat> {
        coords.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = a.len();
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    }

    fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
    }

    fn assert_close(a: &[Vec<f64>], b: &[Vec<f64>]) {
        for (ra, rb) in a.iter().zip(b) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).abs() < 1e-10, "{a:?} vs {b:?}");
            }
        }
    }

    fn check_normal_form(l: &[Vec<f64>]) -> LatticeNormalization {
        let n = normalize_lattice(l).unwrap();
        let d = l.len();
        let id: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| f64::from(i == j)).collect()).collect();
        assert_close(&mat_mul(&n.rotation, &transpose(&n.rotation)), &id);
        assert_close(&mat_mul(l, &transpose(&n.rotation)), &n.lower);
        for i in 0..d {
            for j in i + 1..d {
                assert_eq!(n.lower[i][j], 0.0);
            }
        }
        n
    }

    #[test]
    fn normalize_already_triangular() {
        let l = vec![vec![2.0, 0.0], vec![1.0, 3.0]];
        let n = check_normal_form(&l);
        assert_close(&n.lower, &l);
        assert_close(&n.rotation, &[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(!n.reflected);
    }

    #[test]
    fn normalize_rotated_identity() {
        let l = vec![vec![0.0, 1.0], vec![-1.0, 0.0]];
        let n = check_normal_form(&l);
        assert_close(&n.lower, &[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(!n.reflected);
    }

    #[test]
    fn normalize_swap_needs_reflection() {
        let l = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let n = check_normal_form(&l);
        assert!(n.reflected);
        assert!(n.lower[0][0] > 0.0);
        assert!((n.lower[0][0] * n.lower[1][1]).abs() - 1.0 < 1e-12);
    }

    #[test]
    fn normalize_three_dimensional() {
        let l = vec![vec![1.0, 2.0, 0.5], vec![0.0, 1.0, -1.0], vec![3.0, 0.0, 1.0]];
        let n = check_normal_form(&l);
        let det = n.lower[0][0] * n.lower[1][1] * n.lower[2][2];
        assert!(det > 0.0 || n.reflected);
    }

    #[test]
    fn normalize_rejects_singular() {
        assert_eq!(
            normalize_lattice(&[vec![1.0, 2.0], vec![2.0, 4.0]]),
            Err(Error::SingularLattice)
        );
        assert_eq!(
            Torus::new(QMatrix::from_i64_rows(&[vec![1, 1], vec![1, 1]])),
            Err(Error::SingularLattice)
        );
    }

    #[test]
    fn unit_torus_reduction() {
        let g = GainGraph::from_triples(2, 1, &[]).unwrap();
        let torus = Torus::new(QMatrix::from_i64_rows(&[vec![2, 0], vec![0, 2]])).unwrap();
        let f = OrbitFramework::new(g, torus, vec![pt(&[(1, 1), (1, 2)])]).unwrap();
        let u = to_unit_torus(&f);
        assert!(u.torus().is_unit());
        assert_eq!(u.position(0), pt(&[(1, 2), (1, 4)]).as_slice());
        assert_eq!(to_unit_torus(&u), u);
    }

    #[test]
    fn coincident_positions_modulo_lattice() {
        let g = GainGraph::from_triples(2, 2, &[(0, 1, &[0, 0])]).unwrap();
        let p = vec![pt(&[(1, 4), (1, 2)]), pt(&[(5, 4), (-1, 2)])];
        assert_eq!(
            OrbitFramework::new(g.clone(), Torus::unit(2), p.clone()),
            Err(Error::CoincidentPositions(0, 1))
        );
        let f = OrbitFramework::new_degenerate(g, Torus::unit(2), p).unwrap();
        assert!(f.is_degenerate());
    }

    #[test]
    fn edge_lengths() {
        let g = GainGraph::from_triples(2, 2, &[]).unwrap();
        let f = OrbitFramework::new(g, Torus::unit(2), vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 2), (0, 1)])]).unwrap();
        assert_eq!(edge_length(&f, 0, 0, &Gain::zero(2)).unwrap(), 0.0);
        assert_eq!(edge_length(&f, 0, 1, &Gain::zero(2)).unwrap(), 0.5);
        let m = Gain::from_i64s(&[1, 0]);
        assert_eq!(edge_length(&f, 0, 1, &m).unwrap(), 1.5);
        assert_eq!(edge_length(&f, 1, 0, &m).unwrap(), 0.5);
        assert_eq!(
            edge_length_squared(&f, 0, 1, &m).unwrap(),
            edge_length_squared(&f, 1, 0, &-&m).unwrap()
        );
        assert!(matches!(edge_length(&f, 0, 5, &m), Err(Error::VertexIndex { .. })));
    }

    fn zigzag_framework(gains: [&[i64]; 2], p: [Vec<Rat>; 2]) -> OrbitFramework {
        let g = GainGraph::from_triples(2, 2, &[(0, 1, gains[0]), (0, 1, gains[1])]).unwrap();
        let [a, b] = p;
        OrbitFramework::new(g, Torus::unit(2), vec![a, b]).unwrap()
    }

    #[test]
    fn congruence_examples() {
        let f = zigzag_framework([&[0, 0], &[1, 0]], [pt(&[(1, 10), (1, 10)]), pt(&[(1, 2), (1, 5)])]);
        let w = congruent(&f, &f).unwrap().unwrap();
        assert!(w.translation.iter().all(Zero::is_zero));

        // Shift by (3/10, 4/10) without leaving the cell.
        let g = zigzag_framework([&[0, 0], &[1, 0]], [pt(&[(4, 10), (5, 10)]), pt(&[(8, 10), (6, 10)])]);
        let w = congruent(&f, &g).unwrap().unwrap();
        assert_eq!(w.translation, pt(&[(3, 10), (4, 10)]));
        assert!(w.offsets.iter().all(Gain::is_zero));

        // Shift by (6/10, 0): vertex 1 wraps from x = 1/2 to x = 1/10.
        let wrapped_p = [pt(&[(7, 10), (1, 10)]), pt(&[(1, 10), (1, 5)])];
        let unchanged = zigzag_framework([&[0, 0], &[1, 0]], wrapped_p.clone());
        assert_eq!(congruent(&f, &unchanged).unwrap(), None);
        // ℓ(1) = (1,0), ℓ(0) = 0, so every gain on 0→1 grows by (1,0).
        let adjusted = zigzag_framework([&[1, 0], &[2, 0]], wrapped_p);
        let w = congruent(&f, &adjusted).unwrap().unwrap();
        assert_eq!(w.offsets[1], Gain::from_i64s(&[1, 0]));
    }

    #[test]
    fn congruence_through_lattice() {
        let g = GainGraph::from_triples(2, 2, &[(0, 1, &[0, 0]), (1, 1, &[1, 0])]).unwrap();
        let torus = Torus::new(QMatrix::from_i64_rows(&[vec![2, 0], vec![1, 3]])).unwrap();
        let f = OrbitFramework::new(g.clone(), torus, vec![pt(&[(1, 2), (1, 2)]), pt(&[(1, 1), (2, 1)])]).unwrap();
        let u = to_unit_torus(&f);
        assert!(congruent(&f, &u).unwrap().is_some());
        let flipped = g.with_gains(vec![Gain::zero(2), Gain::from_i64s(&[-1, 0])]).unwrap();
        assert!(congruent(&f, &f.with_graph(flipped).unwrap()).unwrap().is_some());
    }

    #[test]
    fn affine_image_moves_lattice() {
        let g = GainGraph::from_triples(2, 1, &[]).unwrap();
        let f = OrbitFramework::new(g, Torus::unit(2), vec![pt(&[(1, 2), (1, 3)])]).unwrap();
        let b = QMatrix::from_i64_rows(&[vec![2, 1], vec![0, 1]]);
        let img = affine_image(&f, &b, &pt(&[(1, 1), (0, 1)])).unwrap();
        assert_eq!(img.torus().lattice(), &b);
        assert_eq!(img.position(0), pt(&[(2, 1), (5, 6)]).as_slice());
        assert_eq!(to_unit_torus(&img).position(0), pt(&[(1, 1), (-1, 6)]).as_slice());
    }
}
