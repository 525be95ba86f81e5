//! Pulling triangulations from the face lattice.

use std::collections::HashMap;

use super::dd::HFacet;
use super::{AffineFrame, Simplex};
use crate::linalg::{QMatrix, QVector};
use crate::rational::Rational;

/// Facets of a face, given the facets of the enclosing polytope: the
/// inclusion-maximal nonempty intersections with the other facets.
pub fn ridges_of(face: &[u32], others: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut cands: Vec<Vec<u32>> = others
        .iter()
        .filter(|g| g.as_slice() != face)
        .map(|g| intersect(face, g))
        .filter(|r| !r.is_empty() && r.len() < face.len())
        .collect();
    cands.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    cands.dedup();
    let mut out: Vec<Vec<u32>> = Vec::new();
    for c in cands {
        if !out.iter().any(|r| is_subset(&c, r)) {
            out.push(c);
        }
    }
    out.sort();
    out
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    intersect(a, b).len() == a.len()
}

/// Triangulates a full-dimensional point set by repeatedly pulling its
/// smallest-index point. Simplices list sorted point indices.
pub fn pulling_triangulation(points: &[QVector], facets: &[HFacet]) -> Vec<Simplex> {
    let all: Vec<u32> = (0..points.len() as u32).collect();
    let fs: Vec<Vec<u32>> = facets.iter().map(|f| f.incident.clone()).collect();
    let dim = points.first().map_or(0, |p| p.len());
    let mut out = Vec::new();
    pull(&all, &fs, dim, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    out
}

fn pull(face: &[u32], facets: &[Vec<u32>], dim: usize, apex: &mut Vec<u32>, out: &mut Vec<Simplex>) {
    if dim == 0 {
        let mut v: Vec<usize> = apex.iter().map(|&i| i as usize).collect();
        v.push(face[0] as usize);
        v.sort_unstable();
        out.push(Simplex { vertices: v });
        return;
    }
    let v0 = face[0];
    apex.push(v0);
    for g in facets {
        if g.binary_search(&v0).is_ok() {
            continue;
        }
        let ridges = if dim == 1 { Vec::new() } else { ridges_of(g, facets) };
        pull(g, &ridges, dim - 1, apex, out);
    }
    apex.pop();
}

/// Volume of a full-dimensional point set by the same pulling recursion as
/// [`pulling_triangulation`], without listing simplices: each face's volume
/// in its own hull frame is computed once.
pub fn pulling_volume(points: &[QVector], facets: &[HFacet]) -> Rational {
    let all: Vec<u32> = (0..points.len() as u32).collect();
    let fs: Vec<Vec<u32>> = facets.iter().map(|f| f.incident.clone()).collect();
    let dim = points.first().map_or(0, |p| p.len());
    let frame = AffineFrame::of(points);
    let mut memo = HashMap::new();
    face_volume(points, &all, &fs, dim, &mut memo) * frame.dirs.determinant().abs()
}

fn face_volume(
    points: &[QVector],
    face: &[u32],
    facets: &[Vec<u32>],
    dim: usize,
    memo: &mut HashMap<Vec<u32>, Rational>,
) -> Rational {
    if dim == 0 {
        return Rational::one();
    }
    if let Some(v) = memo.get(face) {
        return v.clone();
    }
    let pts = |f: &[u32]| -> Vec<QVector> { f.iter().map(|&i| points[i as usize].clone()).collect() };
    let frame = AffineFrame::of(&pts(face));
    let mut total = Rational::zero();
    for g in facets {
        if g.binary_search(&face[0]).is_ok() {
            continue;
        }
        let ridges = if dim == 1 { Vec::new() } else { ridges_of(g, facets) };
        let vg = face_volume(points, g, &ridges, dim - 1, memo);
        let gf = AffineFrame::of(&pts(g));
        // Cone over g from the apex, which is the origin of this frame.
        let mut cols: Vec<QVector> = (0..gf.dim()).map(|j| frame.coord.mul_vec(&gf.dirs.column(j))).collect();
        cols.push(frame.coords(&gf.origin));
        total += &(&QMatrix::from_columns(&cols).determinant().abs() * &vg);
    }
    let v = total / Rational::from_integer(dim as i64);
    memo.insert(face.to_vec(), v.clone());
    v
}
