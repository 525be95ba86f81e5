//! Convex polytopes given by vertices: facet enumeration with and without
//! symmetry, triangulation and exact volumes.

mod adjacency;
mod dd;
mod triangulate;
mod volume;

use serde::{Deserialize, Serialize};

pub(crate) use adjacency::facet_orbits;
pub use adjacency::{sym_facets, sym_facets_full, FacetOrbit, DD_VERTEX_THRESHOLD};
pub use dd::{dd_full, HFacet};
pub use triangulate::{pulling_triangulation, pulling_volume, ridges_of};
pub use volume::{symmetric_volume, SYMMETRIC_VOLUME_THRESHOLD};

use crate::error::{Error, Result};
use crate::linalg::{dot, independent_subset, vsub, GramForm, QMatrix, QVector};
use crate::rational::Rational;

/// Affine coordinates on the hull of a point set: `x = origin + dirs·λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFrame {
    pub origin: QVector,
    /// Columns are the direction vectors.
    pub dirs: QMatrix,
    // (DᵀD)⁻¹ Dᵀ, the coordinate map on the hull.
    coord: QMatrix,
}

impl AffineFrame {
    pub fn of(points: &[QVector]) -> Self {
        let origin = points[0].clone();
        let diffs: Vec<QVector> = points.iter().map(|p| vsub(p, &origin)).collect();
        let idx = independent_subset(&diffs);
        let cols: Vec<QVector> = idx.iter().map(|&i| diffs[i].clone()).collect();
        let n = origin.len();
        let dirs = if cols.is_empty() { QMatrix::zeros(n, 0) } else { QMatrix::from_columns(&cols) };
        let dt = dirs.transpose();
        let coord = if cols.is_empty() {
            QMatrix::zeros(0, n)
        } else {
            dt.mul(&dirs).inverse().expect("independent directions").mul(&dt)
        };
        AffineFrame { origin, dirs, coord }
    }

    pub fn dim(&self) -> usize {
        self.dirs.cols()
    }

    /// The linear part of [`AffineFrame::coords`].
    pub fn coord_matrix(&self) -> &QMatrix {
        &self.coord
    }

    pub fn coords(&self, x: &[Rational]) -> QVector {
        self.coord.mul_vec(&vsub(x, &self.origin))
    }

    pub fn point(&self, lambda: &[Rational]) -> QVector {
        let d = self.dirs.mul_vec(lambda);
        d.iter().zip(&self.origin).map(|(a, b)| a + b).collect()
    }

    /// Lifts `α·λ ≤ β` on the hull to an ambient inequality orthogonal to the
    /// hull's complement under the standard inner product.
    pub fn lift_inequality(&self, alpha: &[Rational], beta: &Rational) -> (QVector, Rational) {
        let a = self.coord.transpose().mul_vec(alpha);
        let b = beta + &dot(&a, &self.origin);
        (a, b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPolytope {
    vertices: Vec<QVector>,
    ambient_dim: usize,
    affine_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: QVector,
    pub offset: Rational,
    /// Sorted vertex indices on the facet.
    pub incident: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simplex {
    pub vertices: Vec<usize>,
}

impl VPolytope {
    /// Drops repeated points, keeping first occurrences.
    pub fn new(points: Vec<QVector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Degenerate("empty vertex set".into()));
        };
        let ambient_dim = first.len();
        if points.iter().any(|p| p.len() != ambient_dim) {
            return Err(Error::Invalid("points of mixed dimension".into()));
        }
        let mut seen = std::collections::HashSet::new();
        let vertices: Vec<QVector> = points.into_iter().filter(|p| seen.insert(p.clone())).collect();
        let affine_dim = AffineFrame::of(&vertices).dim();
        Ok(VPolytope { vertices, ambient_dim, affine_dim })
    }

    pub fn from_i64(points: &[Vec<i64>]) -> Result<Self> {
        Self::new(points.iter().map(|p| crate::linalg::qvec(p)).collect())
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.ambient_dim
    }

    pub fn frame(&self) -> AffineFrame {
        AffineFrame::of(&self.vertices)
    }

    /// The vertices in coordinates of their affine hull.
    pub fn hull_coordinates(&self) -> (AffineFrame, Vec<QVector>) {
        let f = self.frame();
        let c = self.vertices.iter().map(|v| f.coords(v)).collect();
        (f, c)
    }

    fn lift(&self, frame: &AffineFrame, h: &HFacet) -> Facet {
        let (a, b) = frame.lift_inequality(&h.normal, &h.offset);
        let (normal, offset) = HFacet::canonical(a, b);
        Facet { normal, offset, incident: h.incident.iter().map(|&i| i as usize).collect() }
    }
}

/// All facets, sorted by incident set; normals are primitive integer vectors
/// lying in the linear span of the hull directions.
pub fn dd_facets(p: &VPolytope) -> Vec<Facet> {
    if p.affine_dim == 0 {
        return Vec::new();
    }
    let (frame, coords) = p.hull_coordinates();
    dd_full(&coords).iter().map(|h| p.lift(&frame, h)).collect()
}

/// Full-dimensional (Lebesgue) volume; zero for lower-dimensional polytopes.
pub fn volume(p: &VPolytope) -> Rational {
    if !p.is_full_dimensional() {
        return Rational::zero();
    }
    hull_volume(p) * p.frame().dirs.determinant().abs()
}

/// Volume measured in the hull coordinates of [`AffineFrame::of`].
fn hull_volume(p: &VPolytope) -> Rational {
    let (_, coords) = p.hull_coordinates();
    if p.affine_dim == 0 {
        return Rational::one();
    }
    let facets = dd_full(&coords);
    pulling_volume(&coords, &facets)
}

/// `|det(v₁ − v₀, …, v_k − v₀)| / k!` for a full-dimensional simplex.
pub fn simplex_volume(points: &[QVector], idx: &[usize]) -> Rational {
    let k = idx.len() - 1;
    let v0 = &points[idx[0]];
    let cols: Vec<QVector> = idx[1..].iter().map(|&i| vsub(&points[i], v0)).collect();
    let det = QMatrix::from_columns(&cols).determinant().abs();
    let fact: i64 = (1..=k as i64).product();
    det / Rational::from_integer(fact)
}

/// Squared intrinsic content under the metric `g`, for any affine dimension.
pub fn content_sq(g: &GramForm, p: &VPolytope) -> Rational {
    let v = hull_volume(p);
    let d = p.frame().dirs;
    let gd = d.transpose().mul(g.matrix()).mul(&d);
    &(&v * &v) * &gd.determinant()
}

/// Triangulation without new vertices; `facets` must be the facets of `p`.
pub fn triangulate(p: &VPolytope, facets: &[Facet]) -> Result<Vec<Simplex>> {
    if p.affine_dim == 0 {
        return Ok(vec![Simplex { vertices: vec![0] }]);
    }
    let (_, coords) = p.hull_coordinates();
    let hf: Vec<HFacet> = facets
        .iter()
        .map(|f| HFacet {
            normal: Vec::new(),
            offset: Rational::zero(),
            incident: f.incident.iter().map(|&i| i as u32).collect(),
        })
        .collect();
    Ok(pulling_triangulation(&coords, &hf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec;
    use crate::rational::q;

    fn square() -> VPolytope {
        VPolytope::from_i64(&[vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1]]).unwrap()
    }

    fn cube(n: usize, side: i64) -> VPolytope {
        VPolytope::from_i64(&(0..1 << n).map(|m: usize| (0..n).map(|j| ((m >> j) & 1) as i64 * side).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn square_facets() {
        let f = dd_facets(&square());
        assert_eq!(f.len(), 4);
        let mut normals: Vec<QVector> = f.iter().map(|h| h.normal.clone()).collect();
        normals.sort();
        assert_eq!(normals, vec![qvec(&[-1, 0]), qvec(&[0, -1]), qvec(&[0, 1]), qvec(&[1, 0])]);
        assert!(f.iter().all(|h| h.offset == q(1, 1)));
    }

    #[test]
    fn simplex_facets() {
        let p = VPolytope::from_i64(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(dd_facets(&p).len(), 4);
    }

    #[test]
    fn lower_dimensional_facets() {
        // A square in the plane z = 1 inside R³.
        let p = VPolytope::from_i64(&[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(p.affine_dim(), 2);
        let f = dd_facets(&p);
        assert_eq!(f.len(), 4);
        for h in &f {
            assert!(h.normal[2].is_zero());
            for (i, v) in p.vertices().iter().enumerate() {
                let s = &h.offset - &dot(&h.normal, v);
                assert!(!s.is_negative());
                assert_eq!(s.is_zero(), h.incident.contains(&i));
            }
        }
        assert_eq!(volume(&p), q(0, 1));
        assert_eq!(content_sq(&GramForm::identity(3), &p), q(1, 1));
    }

    #[test]
    fn volumes_and_triangulations() {
        let c = cube(3, 2);
        let f = dd_facets(&c);
        let t = triangulate(&c, &f).unwrap();
        assert_eq!(t.len(), 6);
        let vols: Vec<Rational> = t.iter().map(|s| simplex_volume(c.vertices(), &s.vertices)).collect();
        assert!(vols.iter().all(|v| *v == q(4, 3)));
        assert_eq!(volume(&c), q(8, 1));
        assert_eq!(volume(&VPolytope::from_i64(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap()), q(1, 2));
        assert_eq!(triangulate(&square(), &dd_facets(&square())).unwrap().len(), 2);
        let hex = VPolytope::from_i64(&[vec![2, 0], vec![1, 2], vec![-1, 2], vec![-2, 0], vec![-1, -2], vec![1, -2]]).unwrap();
        assert_eq!(triangulate(&hex, &dd_facets(&hex)).unwrap().len(), 4);
        assert_eq!(volume(&hex), q(12, 1));
    }

    #[test]
    fn hexagonal_voronoi_cell_content() {
        // Voronoi cell of A₂ in lattice coordinates of the Gram form [[2,1],[1,2]].
        let g = GramForm::from_i64_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let pts: Vec<QVector> = [(1, 1), (2, -1), (1, -2), (-1, -1), (-2, 1), (-1, 2)]
            .iter()
            .map(|&(a, b)| vec![q(a, 3), q(b, 3)])
            .collect();
        let hex = VPolytope::new(pts).unwrap();
        assert_eq!(volume(&hex), q(1, 1));
        assert_eq!(content_sq(&g, &hex), q(3, 1));
    }
}
