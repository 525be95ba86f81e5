//! Second moments of polytopes and quantizer constants of lattices.
//!
//! Moments are packed as the block matrix `∫ (1, x)(1, x)ᵀ dx`, so an affine
//! map `x ↦ Ax + b` acts by `H M Hᵀ` with `H = [[1, 0], [b, A]]`.
//!
//! The symmetric method splits a polytope into cones from its vertex
//! barycenter over one facet per orbit, measures each facet the same way
//! under its stabilizer (or by pulling cones when the stabilizer is small),
//! and replaces the orbit sum by the unique invariant point in the affine
//! hull of the orbit.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cvp::relevant_vectors;
use crate::delone::OrbitSet;
use crate::error::{Error, Result};
use crate::linalg::{barycenter, qvec, vsub, GramForm, QMatrix, QVector};
use crate::polyhedra::{self, dd_full, ridges_of, AffineFrame, VPolytope};
use crate::rational::Rational;
use crate::symmetry::{linear_action, MatrixGroup, PermGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentData {
    pub i0: Rational,
    pub i1: QVector,
    pub i2: QMatrix,
}

impl MomentData {
    pub fn zero(n: usize) -> Self {
        MomentData { i0: Rational::zero(), i1: vec![Rational::zero(); n], i2: QMatrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.i1.len()
    }

    pub fn from_block(m: &QMatrix) -> Self {
        let n = m.rows() - 1;
        let mut i2 = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                i2[(i, j)] = m[(i + 1, j + 1)].clone();
            }
        }
        MomentData { i0: m[(0, 0)].clone(), i1: (1..=n).map(|i| m[(i, 0)].clone()).collect(), i2 }
    }

    pub fn to_block(&self) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zeros(n + 1, n + 1);
        m[(0, 0)] = self.i0.clone();
        for i in 0..n {
            m[(i + 1, 0)] = self.i1[i].clone();
            m[(0, i + 1)] = self.i1[i].clone();
            for j in 0..n {
                m[(i + 1, j + 1)] = self.i2[(i, j)].clone();
            }
        }
        m
    }

    pub fn add(&self, other: &MomentData) -> MomentData {
        MomentData::from_block(&self.to_block().add(&other.to_block()))
    }

    /// Moments of the image under `x ↦ Ax + b` for square invertible `A`.
    pub fn transformed(&self, a: &QMatrix, b: &[Rational]) -> MomentData {
        let h = affine_block(a, b);
        let m = h.mul(&self.to_block()).mul(&h.transpose());
        MomentData::from_block(&m.scale(&a.determinant().abs()))
    }

    pub fn translated(&self, t: &[Rational]) -> MomentData {
        self.transformed(&QMatrix::identity(self.dim()), t)
    }

    /// `∫ ‖x‖² dx` in the metric `g`, which is `trace(g · i2)`.
    pub fn second_moment(&self, g: &GramForm) -> Rational {
        g.matrix().mul(&self.i2).trace()
    }
}

/// `[[1, 0], [b, A]]`.
pub fn affine_block(a: &QMatrix, b: &[Rational]) -> QMatrix {
    let n = a.rows();
    let mut h = QMatrix::zeros(n + 1, a.cols() + 1);
    h[(0, 0)] = Rational::one();
    for i in 0..n {
        h[(i + 1, 0)] = b[i].clone();
        for j in 0..a.cols() {
            h[(i + 1, j + 1)] = a[(i, j)].clone();
        }
    }
    h
}

fn homog(x: &[Rational]) -> QVector {
    let mut w = Vec::with_capacity(x.len() + 1);
    w.push(Rational::one());
    w.extend_from_slice(x);
    w
}

fn outer(a: &[Rational], b: &[Rational]) -> QMatrix {
    QMatrix::from_rows(a.iter().map(|x| b.iter().map(|y| x * y).collect()).collect())
}

fn simplex_volume_checked(vertices: &[QVector]) -> Result<Rational> {
    let n = vertices.len().saturating_sub(1);
    if vertices.is_empty() || vertices.iter().any(|v| v.len() != n) {
        return Err(Error::Invalid(format!("a simplex in dimension {n} needs {} vertices", n + 1)));
    }
    let cols: Vec<QVector> = vertices[1..].iter().map(|v| vsub(v, &vertices[0])).collect();
    let det = if n == 0 { Rational::one() } else { QMatrix::from_columns(&cols).determinant().abs() };
    if det.is_zero() {
        return Err(Error::Degenerate("simplex vertices are affinely dependent".into()));
    }
    let fact: i64 = (1..=n as i64).product();
    Ok(det / Rational::from_integer(fact))
}

/// `∫_S ‖x‖² dx = vol S / ((n+1)(n+2)) · (‖Σvᵢ‖² + Σ‖vᵢ‖²)` in the metric `g`.
pub fn simplex_moment(g: &GramForm, vertices: &[QVector]) -> Result<Rational> {
    let vol = simplex_volume_checked(vertices)?;
    if vertices[0].len() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: vertices[0].len() });
    }
    let n = g.dim() as i64;
    let sum = vertices.iter().skip(1).fold(vertices[0].clone(), |acc, v| acc.iter().zip(v).map(|(a, b)| a + b).collect());
    let norms: Rational = vertices.iter().map(|v| g.norm(v)).sum();
    Ok(&vol * &(&(&g.norm(&sum) + &norms) / &Rational::from_integer((n + 1) * (n + 2))))
}

/// Full moment data of a simplex: `vol/((n+1)(n+2)) (Σ wᵢwᵢᵀ + (Σwᵢ)(Σwᵢ)ᵀ)`
/// with `wᵢ = (1, vᵢ)`.
pub fn simplex_moments(vertices: &[QVector]) -> Result<MomentData> {
    let vol = simplex_volume_checked(vertices)?;
    let n = vertices[0].len();
    let ws: Vec<QVector> = vertices.iter().map(|v| homog(v)).collect();
    let mut sum = vec![Rational::zero(); n + 1];
    let mut m = QMatrix::zeros(n + 1, n + 1);
    for w in &ws {
        m = m.add(&outer(w, w));
        sum = sum.iter().zip(w).map(|(a, b)| a + b).collect();
    }
    m = m.add(&outer(&sum, &sum));
    let k = Rational::from_integer(((n + 1) * (n + 2)) as i64);
    Ok(MomentData::from_block(&m.scale(&(&vol / &k))))
}

/// Sum over a triangulation without new vertices.
pub fn moments_by_triangulation(p: &VPolytope) -> Result<MomentData> {
    if !p.is_full_dimensional() {
        return Err(Error::Degenerate("moments need a full-dimensional polytope".into()));
    }
    let facets = polyhedra::dd_facets(p);
    let mut total = MomentData::zero(p.ambient_dim());
    for s in polyhedra::triangulate(p, &facets)? {
        let pts: Vec<QVector> = s.vertices.iter().map(|&i| p.vertices()[i].clone()).collect();
        total = total.add(&simplex_moments(&pts)?);
    }
    Ok(total)
}

/// Moments of a polytope invariant under `group` whose vertex barycenter is
/// the origin.
pub fn moments_symmetric(p: &VPolytope, group: &MatrixGroup) -> Result<MomentData> {
    moments_symmetric_with_cap(p, group, usize::MAX)
}

pub fn moments_symmetric_with_cap(p: &VPolytope, group: &MatrixGroup, cap: usize) -> Result<MomentData> {
    let n = p.ambient_dim();
    if !p.is_full_dimensional() {
        return Err(Error::Degenerate("moments need a full-dimensional polytope".into()));
    }
    if group.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: group.dim() });
    }
    if barycenter(p.vertices()).iter().any(|x| !x.is_zero()) {
        return Err(Error::Invalid("the vertex barycenter must be the origin".into()));
    }
    let perms = group.permutation_action(p.vertices())?;
    let mut ctx = Integrator::new(p.vertices(), cap);
    let all: Vec<u32> = (0..p.vertices().len() as u32).collect();
    let face = ctx.face(&all);
    let m = if perms.is_trivial() { ctx.pull_face(&face, n)? } else { ctx.sym_face(&face, &perms, n)? };
    // The top face is measured in its hull frame.
    Ok(MomentData::from_block(&m.scale(&face.frame.dirs.determinant().abs())))
}

struct Face {
    idx: Vec<u32>,
    frame: AffineFrame,
    local: Vec<QVector>,
}

impl Face {
    /// `E = [[1, 0], [o, D]]`, hull coordinates to ambient.
    fn lift(&self) -> QMatrix {
        affine_block(&self.frame.dirs, &self.frame.origin)
    }

    /// A left inverse of `E`: ambient to hull coordinates.
    fn chart(&self) -> QMatrix {
        let j = self.frame.dim();
        let n = self.frame.origin.len();
        let c = self.frame.coord_matrix();
        let co = c.mul_vec(&self.frame.origin);
        let mut h = QMatrix::zeros(j + 1, n + 1);
        h[(0, 0)] = Rational::one();
        for i in 0..j {
            h[(i + 1, 0)] = -&co[i];
            for k in 0..n {
                h[(i + 1, k + 1)] = c[(i, k)].clone();
            }
        }
        h
    }
}

/// Face moments `∫_F (1, x)(1, x)ᵀ dλ_F` in ambient coordinates, where
/// `λ_F` are the hull coordinates of [`AffineFrame::of`] on `F`'s sorted
/// vertices. The memo is keyed by vertex sets.
struct Integrator<'a> {
    pts: &'a [QVector],
    cap: usize,
    memo: HashMap<Vec<u32>, QMatrix>,
}

impl<'a> Integrator<'a> {
    fn new(pts: &'a [QVector], cap: usize) -> Self {
        Integrator { pts, cap, memo: HashMap::new() }
    }

    fn face(&self, idx: &[u32]) -> Face {
        let p: Vec<QVector> = idx.iter().map(|&i| self.pts[i as usize].clone()).collect();
        let frame = AffineFrame::of(&p);
        let local = p.iter().map(|x| frame.coords(x)).collect();
        Face { idx: idx.to_vec(), frame, local }
    }

    fn point(&self, i: u32) -> QMatrix {
        let w = homog(&self.pts[i as usize]);
        outer(&w, &w)
    }

    /// Symmetric recursion when the stabilizer is large, pulling otherwise.
    fn measure(&mut self, face: &Face, group: &PermGroup, j: usize) -> Result<QMatrix> {
        if j == 0 {
            return Ok(self.point(face.idx[0]));
        }
        if let Some(m) = self.memo.get(&face.idx) {
            return Ok(m.clone());
        }
        let big = group.order() > num_bigint::BigUint::from(4 * face.idx.len());
        if big && j >= 2 {
            self.sym_face(face, group, j)
        } else {
            self.pull_face(face, j)
        }
    }

    fn sym_face(&mut self, face: &Face, group: &PermGroup, j: usize) -> Result<QMatrix> {
        if let Some(m) = self.memo.get(&face.idx) {
            return Ok(m.clone());
        }
        let apex = barycenter(&face.idx.iter().map(|&i| self.pts[i as usize].clone()).collect::<Vec<_>>());
        let gens = hull_actions(&face.local, group)?;
        let (lift, chart) = (face.lift(), face.chart());
        let coord = face.frame.coord_matrix().clone();
        let mut total = QMatrix::zeros(apex.len() + 1, apex.len() + 1);
        for (f_local, size) in polyhedra::facet_orbits(&face.local, group, self.cap)? {
            let gidx: Vec<u32> = f_local.iter().map(|&k| face.idx[k as usize]).collect();
            let gface = self.face(&gidx);
            let (_, stab) = group.set_stabilizer(&f_local, self.cap)?;
            let mg = self.measure(&gface, &stab.restrict(&f_local)?, j - 1)?;
            let cone = cone_moments(&coord, &apex, &gface.frame, &mg, j);
            let inv = invariant_point(&chart.mul(&cone).mul(&chart.transpose()), &gens)?;
            total = total.add(&lift.mul(&inv).mul(&lift.transpose()).scale(&Rational::from_integer(size as i64)));
        }
        self.memo.insert(face.idx.clone(), total.clone());
        Ok(total)
    }

    fn pull_face(&mut self, face: &Face, j: usize) -> Result<QMatrix> {
        if j == 0 {
            return Ok(self.point(face.idx[0]));
        }
        if let Some(m) = self.memo.get(&face.idx) {
            return Ok(m.clone());
        }
        let facets: Vec<Vec<u32>> = dd_full(&face.local)
            .into_iter()
            .map(|h| h.incident.iter().map(|&k| face.idx[k as usize]).collect())
            .collect();
        Ok(self.pull(&face.idx, &facets, j))
    }

    /// Cones from the first vertex over the facets that miss it.
    fn pull(&mut self, idx: &[u32], facets: &[Vec<u32>], j: usize) -> QMatrix {
        if j == 0 {
            return self.point(idx[0]);
        }
        if let Some(m) = self.memo.get(idx) {
            return m.clone();
        }
        let face = self.face(idx);
        let apex = self.pts[idx[0] as usize].clone();
        let coord = face.frame.coord_matrix().clone();
        let n = apex.len();
        let mut total = QMatrix::zeros(n + 1, n + 1);
        for g in facets {
            if g.binary_search(&idx[0]).is_ok() {
                continue;
            }
            let ridges = if j == 1 { Vec::new() } else { ridges_of(g, facets) };
            let mg = self.pull(g, &ridges, j - 1);
            let gframe = AffineFrame::of(&g.iter().map(|&i| self.pts[i as usize].clone()).collect::<Vec<_>>());
            total = total.add(&cone_moments(&coord, &apex, &gframe, &mg, j));
        }
        self.memo.insert(idx.to_vec(), total.clone());
        total
    }
}

/// Moments of the cone from `apex` over a facet `G` of a `j`-dimensional
/// face, measured in the face's hull coordinates `coord`. With `x = (1−t)a +
/// t y` and `dλ = c t^{j−1} dt dλ_G`, the beta integrals give the weights.
fn cone_moments(coord: &QMatrix, apex: &[Rational], gframe: &AffineFrame, mg: &QMatrix, j: usize) -> QMatrix {
    let mut cols: Vec<QVector> = (0..gframe.dim()).map(|k| coord.mul_vec(&gframe.dirs.column(k))).collect();
    cols.push(coord.mul_vec(&vsub(&gframe.origin, apex)));
    let c = QMatrix::from_columns(&cols).determinant().abs();
    let wa = homog(apex);
    let m0 = mg[(0, 0)].clone();
    let m1 = mg.column(0);
    let jj = j as i64;
    let a = Rational::new(2, jj * (jj + 1) * (jj + 2));
    let b = Rational::new(1, (jj + 1) * (jj + 2));
    let d = Rational::new(1, jj + 2);
    let cross = outer(&wa, &m1).add(&outer(&m1, &wa));
    outer(&wa, &wa).scale(&(&a * &m0)).add(&cross.scale(&b)).add(&mg.scale(&d)).scale(&c)
}

/// The affine maps of a vertex permutation group on full-dimensional points,
/// as `(k+1)×(k+1)` blocks.
fn hull_actions(local: &[QVector], group: &PermGroup) -> Result<Vec<QMatrix>> {
    let k = local.first().map_or(0, |p| p.len());
    let ws: Vec<QVector> = local.iter().map(|p| homog(p)).collect();
    let basis = crate::linalg::independent_subset(&ws);
    if basis.len() != k + 1 {
        return Err(Error::Degenerate("points do not span their hull".into()));
    }
    let w = QMatrix::from_columns(&basis.iter().map(|&i| ws[i].clone()).collect::<Vec<_>>());
    let winv = w.inverse()?;
    let mut out = Vec::new();
    for g in group.generators() {
        let img = QMatrix::from_columns(&basis.iter().map(|&i| ws[g.apply(i as u32) as usize].clone()).collect::<Vec<_>>());
        let t = img.mul(&winv);
        if ws.iter().enumerate().any(|(i, x)| t.mul_vec(x) != ws[g.apply(i as u32) as usize]) {
            return Err(Error::Invalid("permutation is not an affine symmetry".into()));
        }
        out.push(t);
    }
    Ok(out)
}

fn sym_vec(m: &QMatrix) -> QVector {
    let n = m.rows();
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].clone()).collect()
}

fn sym_mat(v: &[Rational], n: usize) -> QMatrix {
    let mut m = QMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[(i, j)] = v[k].clone();
            m[(j, i)] = v[k].clone();
            k += 1;
        }
    }
    m
}

/// The average of the orbit of `x0` under `T ↦ T X Tᵀ`: the affine hull of
/// the orbit is grown from generator images until closed, and the average
/// is its only invariant point.
pub fn invariant_point(x0: &QMatrix, gens: &[QMatrix]) -> Result<QMatrix> {
    let n = x0.rows();
    let v0 = sym_vec(x0);
    let act = |t: &QMatrix, x: &QMatrix| t.mul(x).mul(&t.transpose());
    let mut echelon: Vec<(usize, QVector)> = Vec::new();
    let mut dirs: Vec<QMatrix> = Vec::new();
    let mut queue = vec![x0.clone()];
    while let Some(p) = queue.pop() {
        for t in gens {
            let q = act(t, &p);
            let mut r = vsub(&sym_vec(&q), &v0);
            for (piv, row) in &echelon {
                if !r[*piv].is_zero() {
                    let f = r[*piv].clone();
                    r = r.iter().zip(row).map(|(a, b)| a - &(&f * b)).collect();
                }
            }
            if let Some(piv) = r.iter().position(|x| !x.is_zero()) {
                let inv = r[piv].recip();
                let row: QVector = r.iter().map(|x| x * &inv).collect();
                for (_, other) in echelon.iter_mut() {
                    if !other[piv].is_zero() {
                        let f = other[piv].clone();
                        *other = other.iter().zip(&row).map(|(a, b)| a - &(&f * b)).collect();
                    }
                }
                echelon.push((piv, row));
                dirs.push(sym_mat(&vsub(&sym_vec(&q), &v0), n));
                queue.push(q);
            }
        }
    }
    if dirs.is_empty() {
        return Ok(x0.clone());
    }
    // Σ cᵢ (T Dᵢ Tᵀ − Dᵢ) = X₀ − T X₀ Tᵀ for every generator.
    let mut rows: Vec<QVector> = Vec::new();
    let mut rhs: QVector = Vec::new();
    for t in gens {
        let cols: Vec<QVector> = dirs.iter().map(|d| vsub(&sym_vec(&act(t, d)), &sym_vec(d))).collect();
        let target = vsub(&v0, &sym_vec(&act(t, x0)));
        for r in 0..v0.len() {
            rows.push(cols.iter().map(|c| c[r].clone()).collect());
            rhs.push(target[r].clone());
        }
    }
    let c = QMatrix::from_rows(rows)
        .solve_any(&rhs)
        .ok_or_else(|| Error::Invalid("no invariant point in the orbit hull".into()))?;
    Ok(dirs.iter().zip(&c).fold(x0.clone(), |acc, (d, ci)| acc.add(&d.scale(ci))))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizerResult {
    #[serde(rename = "n")]
    pub dimension: usize,
    pub gram_det: Rational,
    /// `∫_V ‖x‖² dx` in lattice coordinates, over a cell of volume 1 there.
    pub second_moment: Rational,
    #[serde(rename = "G_float")]
    pub g_float: f64,
    pub method: String,
    pub cell_vertex_count: usize,
}

impl QuantizerResult {
    fn new(g: &GramForm, moments: &MomentData, method: &str, cell_vertex_count: usize) -> Self {
        let n = g.dim();
        let second_moment = moments.second_moment(g);
        let det = g.determinant();
        let g_float = second_moment.to_f64() / (n as f64 * det.to_f64().powf(1.0 / n as f64));
        QuantizerResult { dimension: n, gram_det: det, second_moment, g_float, method: method.into(), cell_vertex_count }
    }

    /// `G = second_moment / (n · det^{1/n})` when the root is rational.
    pub fn exact_constant(&self) -> Option<Rational> {
        let root = rational_root(&self.gram_det, self.dimension as u32)?;
        Some(&self.second_moment / &(&Rational::from_integer(self.dimension as i64) * &root))
    }
}

fn rational_root(x: &Rational, n: u32) -> Option<Rational> {
    let root = |v: BigInt| -> Option<BigInt> {
        let r = v.nth_root(n);
        (r.pow(n) == v).then_some(r)
    };
    if x.is_negative() {
        return None;
    }
    Some(&Rational::from_bigint(root(x.numer())?) / &Rational::from_bigint(root(x.denom())?))
}

/// Moments of the Voronoi cell: facet orbits come from the relevant vectors,
/// and each facet is integrated under its stabilizer.
pub fn voronoi_moments(orbits: &OrbitSet, cap: usize) -> Result<(MomentData, usize)> {
    let g = &orbits.gram;
    let n = g.dim();
    let vertices = orbits.voronoi_vertices(cap)?;
    let group = &orbits.group;
    let mut ctx = Integrator::new(&vertices, cap);
    let mut seen = std::collections::HashSet::new();
    let mut total = QMatrix::zeros(n + 1, n + 1);
    let gens: Vec<QMatrix> =
        group.generators().iter().map(|a| affine_block(a, &vec![Rational::zero(); n])).collect();
    let origin = vec![Rational::zero(); n];
    for v in relevant_vectors(g)? {
        let v = qvec(&v);
        if seen.contains(&v) {
            continue;
        }
        let (orbit, stab) = group.stabilizer_with(&v, linear_action, cap)?;
        seen.extend(orbit.iter().cloned());
        // Vertices x on the bisector 2 xᵀ g v = vᵀ g v.
        let half = &g.norm(&v) / &Rational::from_integer(2);
        let gv = g.matrix().mul_vec(&v);
        let idx: Vec<u32> = (0..vertices.len() as u32)
            .filter(|&i| crate::linalg::dot(&vertices[i as usize], &gv) == half)
            .collect();
        let face = ctx.face(&idx);
        let pts: Vec<QVector> = idx.iter().map(|&i| vertices[i as usize].clone()).collect();
        let perms = stab.permutation_action(&pts)?;
        let mf = ctx.measure(&face, &perms, n - 1)?;
        let cone = cone_moments(&QMatrix::identity(n), &origin, &face.frame, &mf, n);
        let inv = invariant_point(&cone, &gens)?;
        total = total.add(&inv.scale(&Rational::from_integer(orbit.len() as i64)));
    }
    Ok((MomentData::from_block(&total), vertices.len()))
}

/// The quantizer constant from a complete Delone enumeration.
pub fn quantizer_constant(orbits: &OrbitSet, cap: usize) -> Result<QuantizerResult> {
    let (m, count) = voronoi_moments(orbits, cap)?;
    if m.i0 != Rational::one() {
        return Err(Error::Invalid(format!("Voronoi cell volume {} is not 1", m.i0)));
    }
    Ok(QuantizerResult::new(&orbits.gram, &m, "symmetric", count))
}

/// The same constant by plain triangulation of the expanded cell.
pub fn quantizer_constant_by_triangulation(orbits: &OrbitSet, cap: usize) -> Result<QuantizerResult> {
    let vertices = orbits.voronoi_vertices(cap)?;
    let count = vertices.len();
    let m = moments_by_triangulation(&VPolytope::new(vertices)?)?;
    Ok(QuantizerResult::new(&orbits.gram, &m, "triangulation", count))
}

/// `G` as a float for a rational pair, `second_moment / (n · det^{1/n})`.
pub fn normalized_constant(second_moment: &Rational, gram_det: &Rational, n: usize) -> f64 {
    second_moment.to_f64() / (n as f64 * gram_det.to_f64().powf(1.0 / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::delone::{enumerate_orbits, DeloneOptions};
    use crate::q;

    fn pts(rows: &[&[i64]]) -> Vec<QVector> {
        rows.iter().map(|r| qvec(r)).collect()
    }

    fn constant(l: &catalog::NamedLattice) -> QuantizerResult {
        let o = enumerate_orbits(&l.gram, &l.group().unwrap(), &DeloneOptions::default()).unwrap();
        quantizer_constant(&o, 1 << 20).unwrap()
    }

    #[test]
    fn unit_simplices() {
        let g = GramForm::identity(2);
        assert_eq!(simplex_moment(&g, &pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap(), q(1, 6));
        let m = simplex_moments(&pts(&[&[0], &[1]])).unwrap();
        assert_eq!(m.to_block(), QMatrix::from_rows(vec![vec![q(1, 1), q(1, 2)], vec![q(1, 2), q(1, 3)]]));
        let g3 = GramForm::identity(3);
        let s = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(simplex_moment(&g3, &s).unwrap(), simplex_moments(&s).unwrap().second_moment(&g3));
    }

    #[test]
    fn segment() {
        let p = VPolytope::new(pts(&[&[-1], &[1]])).unwrap();
        let m = moments_by_triangulation(&p).unwrap();
        assert_eq!((m.i0.clone(), m.i1[0].clone(), m.i2[(0, 0)].clone()), (q(2, 1), q(0, 1), q(2, 3)));
        let grp = MatrixGroup::new(1, &[QMatrix::from_i64_rows(&[vec![-1]])], pts(&[&[1], &[-1]])).unwrap();
        assert_eq!(moments_symmetric(&p, &grp).unwrap(), m);
    }

    #[test]
    fn square_and_octahedron_are_isotropic() {
        let sq = VPolytope::new(pts(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])).unwrap();
        let lat = catalog::zn(2).unwrap();
        let m = moments_symmetric(&sq, &lat.group().unwrap()).unwrap();
        assert_eq!(m, moments_by_triangulation(&sq).unwrap());
        assert_eq!(m.i2, QMatrix::identity(2).scale(&q(4, 3)));
        let oct = VPolytope::new(pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]])).unwrap();
        let z3 = catalog::zn(3).unwrap();
        let m = moments_symmetric(&oct, &z3.group().unwrap()).unwrap();
        assert_eq!(m, moments_by_triangulation(&oct).unwrap());
        assert_eq!(m.i0, q(4, 3));
    }

    #[test]
    fn affine_maps_act_covariantly() {
        let s = pts(&[&[0, 0], &[2, 1], &[1, 3]]);
        let a = QMatrix::from_i64_rows(&[vec![1, 2], vec![0, 3]]);
        let b = qvec(&[5, -1]);
        let img: Vec<QVector> = s.iter().map(|x| a.mul_vec(x).iter().zip(&b).map(|(u, v)| u + v).collect()).collect();
        let m = simplex_moments(&s).unwrap();
        assert_eq!(m.transformed(&a, &b), simplex_moments(&img).unwrap());
        assert_eq!(m.translated(&b), simplex_moments(&s.iter().map(|x| x.iter().zip(&b).map(|(u, v)| u + v).collect()).collect::<Vec<_>>()).unwrap());
    }

    #[test]
    fn cubic_lattices_give_one_twelfth() {
        for n in 1..=4 {
            let r = constant(&catalog::zn(n).unwrap());
            assert_eq!(r.second_moment, q(n as i64, 12));
            assert_eq!(r.exact_constant(), Some(q(1, 12)));
        }
    }

    #[test]
    fn hexagonal_lattice() {
        let r = constant(&catalog::an(2).unwrap());
        assert!((r.g_float - 5.0 / (36.0 * 3f64.sqrt())).abs() < 1e-12, "{}", r.g_float);
    }

    #[test]
    fn methods_agree_on_small_lattices() {
        for l in [catalog::an(3).unwrap(), catalog::dn(4).unwrap(), catalog::an(3).unwrap().dual()] {
            let o = enumerate_orbits(&l.gram, &l.group().unwrap(), &DeloneOptions::default()).unwrap();
            let a = quantizer_constant(&o, 1 << 20).unwrap();
            let b = quantizer_constant_by_triangulation(&o, 1 << 20).unwrap();
            assert_eq!(a.second_moment, b.second_moment, "{}", l.name);
        }
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_root(&q(8, 27), 3), Some(q(2, 3)));
        assert_eq!(rational_root(&q(2, 1), 2), None);
    }
}
