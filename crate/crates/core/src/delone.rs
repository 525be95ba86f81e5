//! Delone cells of lattices and their enumeration up to lattice isometries.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cvp::{closest_vectors, vectors_up_to_norm, Enumerator};
use crate::error::{Error, Result};
use crate::linalg::{dot, ibarycenter, independent_subset, qvec, vsub, GramForm, IVector, QMatrix, QVector};
use crate::lp::{LinearProgram, LpStatus};
use crate::polyhedra::{self, Facet, VPolytope};
use crate::rational::Rational;
use crate::symmetry::{
    barycenter_equivalent, linear_action, metric_isomorphism, stabilizer_mod_one, AffineWitness, BaryClass, MatrixGroup,
    Perm, PermGroup, DEFAULT_ORBIT_CAP,
};

/// A Delone cell: lattice points on an empty sphere, in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeloneCell {
    /// Sorted lexicographically.
    pub vertices: Vec<IVector>,
    pub center: QVector,
    pub sq_radius: Rational,
}

/// Isometry invariants used to skip equivalence tests between distinct cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub vertex_count: usize,
    pub sq_radius: Rational,
    /// Sorted squared distances of the vertices from their barycenter.
    pub spread: Vec<Rational>,
}

impl DeloneCell {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn affine_rank(&self) -> usize {
        let v0 = &self.vertices[0];
        let diffs: Vec<QVector> = self.vertices.iter().map(|v| qvec(&sub_int(v, v0))).collect();
        independent_subset(&diffs).len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_rank() == self.dim()
    }

    pub fn barycenter(&self) -> QVector {
        ibarycenter(&self.vertices)
    }

    pub fn fingerprint(&self, g: &GramForm) -> Fingerprint {
        let b = self.barycenter();
        let mut spread: Vec<Rational> = self.vertices.iter().map(|v| g.norm(&vsub(&qvec(v), &b))).collect();
        spread.sort();
        Fingerprint { vertex_count: self.vertices.len(), sq_radius: self.sq_radius.clone(), spread }
    }

    /// Re-checks the empty-sphere property with a closest-vector call.
    pub fn verify_empty_sphere(&self, g: &GramForm) -> bool {
        let r = closest_vectors(g, &self.center);
        r.min_sq_dist == self.sq_radius && r.vectors == self.vertices
    }

    pub fn polytope(&self) -> VPolytope {
        VPolytope::from_i64(&self.vertices).expect("cells have vertices")
    }

    /// Volume in lattice coordinates, so that a fundamental domain has volume 1.
    pub fn lattice_volume(&self) -> Rational {
        polyhedra::volume(&self.polytope())
    }

    pub fn content_sq(&self, g: &GramForm) -> Rational {
        polyhedra::content_sq(g, &self.polytope())
    }

    pub fn transformed(&self, w: &AffineWitness) -> DeloneCell {
        let mut vertices: Vec<IVector> = self.vertices.iter().map(|v| w.apply_int(v)).collect();
        vertices.sort();
        DeloneCell { vertices, center: w.apply(&self.center), sq_radius: self.sq_radius.clone() }
    }

    fn index(&self) -> HashMap<&IVector, u32> {
        self.vertices.iter().enumerate().map(|(i, v)| (v, i as u32)).collect()
    }

    /// Affine symmetries `x ↦ Ax + b − Ab` induced by a group fixing the
    /// barycenter mod 1, as permutations of the vertex indices.
    pub fn vertex_action(&self, stab: &MatrixGroup) -> Result<PermGroup> {
        let b = self.barycenter();
        let index = self.index();
        let mut gens = Vec::new();
        for a in stab.generators() {
            let w = AffineWitness { linear: a.clone(), shift: vsub(&b, &a.mul_vec(&b)) };
            let imgs: Option<Vec<u32>> = self.vertices.iter().map(|v| index.get(&w.apply_int(v)).copied()).collect();
            let imgs = imgs.ok_or_else(|| Error::Invalid("group element does not preserve the cell".into()))?;
            gens.push(Perm::from_images(imgs)?);
        }
        PermGroup::new(self.vertices.len(), gens)
    }
}

fn sub_int(a: &[i64], b: &[i64]) -> IVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Circumcenter of points affinely spanning `Rⁿ` (only the first independent
/// ones are used), from `2(vᵢ − v₀)ᵀ g c = N(vᵢ) − N(v₀)`.
fn circumcenter(g: &GramForm, pts: &[IVector]) -> Result<QVector> {
    let v0 = &pts[0];
    let n0 = g.norm_int(v0);
    let diffs: Vec<QVector> = pts.iter().map(|v| qvec(&sub_int(v, v0))).collect();
    let idx = independent_subset(&diffs);
    if idx.len() != g.dim() {
        return Err(Error::Degenerate("points do not span the space".into()));
    }
    let two = Rational::from_integer(2);
    let rows: Vec<QVector> = idx.iter().map(|&i| g.matrix().mul_vec(&diffs[i]).iter().map(|x| x * &two).collect()).collect();
    let rhs: QVector = idx.iter().map(|&i| &g.norm_int(&pts[i]) - &n0).collect();
    QMatrix::from_rows(rows).solve(&rhs)
}

/// A vertex of the Voronoi cell, by the cutting-plane method with a seeded
/// random objective.
pub fn initial_vertex(g: &GramForm, seed: u64) -> QVector {
    let n = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = Rational::from_integer(1 << 16);
    let c: QVector = (0..n).map(|_| Rational::from_integer(rng.gen_range(-(1i64 << 16)..=(1 << 16))) / &scale).collect();
    let mut lp = LinearProgram::new(c);
    let cut = |lp: &mut LinearProgram, v: &IVector| {
        lp.push(g.functional_int(v), g.norm_int(v) / Rational::from_integer(2));
    };
    for i in 0..n {
        for s in [1, -1] {
            let mut e = vec![0; n];
            e[i] = s;
            cut(&mut lp, &e);
        }
    }
    let zero = vec![0i64; n];
    loop {
        let out = lp.maximize();
        assert_eq!(out.status, LpStatus::Optimal, "cut polytope is bounded");
        let x = out.vertex.unwrap();
        let near = closest_vectors(g, &x);
        if near.vectors.contains(&zero) {
            return x;
        }
        for v in &near.vectors {
            cut(&mut lp, v);
        }
    }
}

/// `D(x)`: the hull of the lattice points nearest to `x`.
pub fn delone_cell(g: &GramForm, x: &[Rational]) -> DeloneCell {
    let near = closest_vectors(g, x);
    match circumcenter(g, &near.vectors) {
        Ok(center) => {
            let sq_radius = g.norm(&vsub(&qvec(&near.vectors[0]), &center));
            DeloneCell { vertices: near.vectors, center, sq_radius }
        }
        Err(_) => DeloneCell { vertices: near.vectors, center: x.to_vec(), sq_radius: near.min_sq_dist },
    }
}

/// Shared data for repeated flips in one lattice.
pub struct FlipContext {
    g: GramForm,
    ginv: QMatrix,
    enumerator: Enumerator,
}

impl FlipContext {
    pub fn new(g: &GramForm) -> Self {
        FlipContext { g: g.clone(), ginv: g.matrix().inverse().expect("positive definite"), enumerator: Enumerator::new(g) }
    }

    /// The full-dimensional cell on the other side of facet `f` of `d`.
    pub fn adjacent_cell(&self, d: &DeloneCell, f: &Facet) -> Result<DeloneCell> {
        let g = &self.g;
        let verts: Vec<QVector> = d.vertices.iter().map(|v| qvec(v)).collect();
        let a = &f.normal;
        let beta = &f.offset;
        if f.incident.is_empty() || f.incident.len() == verts.len() {
            return Err(Error::Invalid("not a facet of the cell".into()));
        }
        for (i, v) in verts.iter().enumerate() {
            let s = beta - &dot(a, v);
            let on = f.incident.binary_search(&i).is_ok();
            if s.is_negative() || s.is_zero() != on {
                return Err(Error::Invalid("not a facet of the cell".into()));
            }
        }
        let f0 = &d.vertices[f.incident[0]];
        let u = self.ginv.mul_vec(a);
        let au = dot(a, &u);
        let outside: Vec<QVector> =
            (0..verts.len()).filter(|i| f.incident.binary_search(i).is_err()).map(|i| verts[i].clone()).collect();
        let beyond = |w: &IVector| dot(a, &qvec(w)) > *beta;

        // Centers c_D + s·u all lie on spheres through the facet's vertices.
        let param = |w: &IVector| -> Rational {
            let dw = g.norm(&vsub(&qvec(w), &d.center));
            let num = &dw - &d.sq_radius;
            let den = &Rational::from_integer(2) * &(&dot(a, &qvec(w)) - beta);
            &num / &den
        };
        let center_at = |s: &Rational| -> QVector { d.center.iter().zip(&u).map(|(c, y)| c + &(s * y)).collect() };
        // Start from the best of the far vertices and their barycenter,
        // reflected through the facet and rounded, and of 2f₀ − v.
        let reflect = |p: &QVector| -> IVector {
            let k = &(&Rational::from_integer(2) * &(&dot(a, p) - beta)) / &au;
            p.iter().zip(&u).map(|(x, y)| (x - &(&k * y)).round_i64()).collect()
        };
        let mut starts: Vec<IVector> = vec![reflect(&crate::linalg::barycenter(&outside))];
        for v in &outside {
            starts.push(reflect(v));
            starts.push(f0.iter().zip(v).map(|(p, q)| 2 * p - q.to_i64().unwrap()).collect());
        }
        let mut s = starts.iter().filter(|w| beyond(w)).map(|w| param(w)).min().expect("2f₀ − v lies beyond the facet");
        loop {
            let c = center_at(&s);
            let r2 = g.norm(&vsub(&qvec(f0), &c));
            let mut better = None;
            self.enumerator.for_each_in_ball(&c, &r2, |w, _| {
                if beyond(w) {
                    let t = param(w);
                    if t < s {
                        better = Some(t);
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(())
            });
            match better {
                Some(t) => s = t,
                None => {
                    let cell = delone_cell(g, &c);
                    if cell.sq_radius != r2 || !cell.is_full_dimensional() {
                        return Err(Error::Degenerate("flip did not produce a full-dimensional cell".into()));
                    }
                    return Ok(cell);
                }
            }
        }
    }
}

pub fn adjacent_cell(g: &GramForm, d: &DeloneCell, f: &Facet) -> Result<DeloneCell> {
    FlipContext::new(g).adjacent_cell(d, f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeloneOptions {
    pub seed: u64,
    pub orbit_cap: usize,
}

impl Default for DeloneOptions {
    fn default() -> Self {
        DeloneOptions { seed: 0, orbit_cap: DEFAULT_ORBIT_CAP }
    }
}

/// One facet orbit of a representative cell and where flipping across it leads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjacency {
    pub facet: Facet,
    pub facet_orbit_size: usize,
    pub neighbor: usize,
    /// Maps the neighbor representative onto the flipped cell.
    pub witness: AffineWitness,
}

#[derive(Clone, Debug)]
pub struct CellOrbit {
    pub cell: DeloneCell,
    /// Number of translation classes of cells in the orbit.
    pub orbit_size: BigUint,
    /// Linear parts of the cell's symmetries.
    pub stabilizer: MatrixGroup,
    pub adjacency: Vec<Adjacency>,
    fingerprint: Fingerprint,
    bary: BaryClass,
}

impl CellOrbit {
    pub fn fingerprint(&self) -> &Fingerprint {
        &self.fingerprint
    }

    pub fn stabilizer_order(&self) -> BigUint {
        self.stabilizer.order()
    }

    pub fn vertex_action(&self) -> PermGroup {
        self.cell.vertex_action(&self.stabilizer).expect("stabilizer preserves its cell")
    }

    /// Cell volume in lattice coordinates, computed up to the stabilizer.
    pub fn lattice_volume(&self) -> Rational {
        polyhedra::symmetric_volume(&self.cell.polytope(), &self.vertex_action(), usize::MAX)
            .expect("stabilizer acts by affine symmetries")
    }
}

/// All full-dimensional Delone cells up to a group of lattice isometries.
#[derive(Clone, Debug)]
pub struct OrbitSet {
    pub gram: GramForm,
    pub group: MatrixGroup,
    pub representatives: Vec<CellOrbit>,
}

struct Flip {
    facet: polyhedra::FacetOrbit,
    cell: DeloneCell,
}

/// Traverses the adjacency graph of cell classes, starting from `D(x₀)` at
/// the cutting-plane vertex `x₀`.
pub fn enumerate_orbits(g: &GramForm, group: &MatrixGroup, opts: &DeloneOptions) -> Result<OrbitSet> {
    if group.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: group.dim() });
    }
    let ctx = FlipContext::new(g);
    let x0 = initial_vertex(g, opts.seed);
    let first = delone_cell(g, &x0);
    let mut reps: Vec<CellOrbit> = vec![new_orbit(g, group, first, opts.orbit_cap)?];
    let mut by_print: BTreeMap<Fingerprint, Vec<usize>> = BTreeMap::new();
    by_print.entry(reps[0].fingerprint.clone()).or_default().push(0);
    let mut next = 0;
    while next < reps.len() {
        let rep = &reps[next];
        let action = rep.vertex_action();
        let facets = polyhedra::sym_facets(&rep.cell.polytope(), &action, opts.orbit_cap)?;
        let flips: Vec<Flip> = facets
            .into_par_iter()
            .map(|fo| ctx.adjacent_cell(&rep.cell, &fo.representative).map(|cell| Flip { facet: fo, cell }))
            .collect::<Result<_>>()?;
        let mut adjacency = Vec::with_capacity(flips.len());
        for flip in flips {
            let fp = flip.cell.fingerprint(g);
            let bary = BaryClass::new(g, &flip.cell.barycenter());
            let mut found = None;
            for &j in by_print.get(&fp).map(|v| v.as_slice()).unwrap_or(&[]) {
                if let Some(w) = equivalence(g, group, &reps[j], &flip.cell, &bary, opts.orbit_cap)? {
                    found = Some((j, w));
                    break;
                }
            }
            let (neighbor, witness) = match found {
                Some(x) => x,
                None => {
                    let j = reps.len();
                    let w = AffineWitness::identity(g.dim());
                    let orbit = new_orbit(g, group, flip.cell.clone(), opts.orbit_cap)?;
                    by_print.entry(orbit.fingerprint.clone()).or_default().push(j);
                    reps.push(orbit);
                    (j, w)
                }
            };
            debug_assert_eq!(reps[neighbor].cell.transformed(&witness), flip.cell);
            adjacency.push(Adjacency {
                facet: flip.facet.representative,
                facet_orbit_size: flip.facet.size,
                neighbor,
                witness,
            });
        }
        reps[next].adjacency = adjacency;
        next += 1;
    }
    Ok(OrbitSet { gram: g.clone(), group: group.clone(), representatives: canonical_order(reps) })
}

fn new_orbit(g: &GramForm, group: &MatrixGroup, cell: DeloneCell, cap: usize) -> Result<CellOrbit> {
    let bary = BaryClass::new(g, &cell.barycenter());
    let (orbit_size, stabilizer) = stabilizer_mod_one(group, &bary, cap)?;
    Ok(CellOrbit { fingerprint: cell.fingerprint(g), cell, orbit_size, stabilizer, adjacency: Vec::new(), bary })
}

/// A witness mapping the representative onto `cell`, by barycenter classes,
/// falling back to a metric isomorphism when orbits exceed the cap.
fn equivalence(
    g: &GramForm,
    group: &MatrixGroup,
    rep: &CellOrbit,
    cell: &DeloneCell,
    bary: &BaryClass,
    cap: usize,
) -> Result<Option<AffineWitness>> {
    match barycenter_equivalent(group, &rep.bary, bary, cap) {
        Ok(Some(a)) => {
            let shift = vsub(&cell.barycenter(), &a.mul_vec(&rep.cell.barycenter()));
            Ok(Some(AffineWitness { linear: a, shift }))
        }
        Ok(None) => Ok(None),
        Err(Error::OrbitCap(_)) => Ok(metric_isomorphism(g, &rep.cell.vertices, &cell.vertices).filter(|w| group.contains(&w.linear))),
        Err(e) => Err(e),
    }
}

/// Sorts representatives by fingerprint (stable) and renumbers adjacencies.
fn canonical_order(reps: Vec<CellOrbit>) -> Vec<CellOrbit> {
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&a, &b| reps[a].fingerprint.cmp(&reps[b].fingerprint).then(a.cmp(&b)));
    let mut new_index = vec![0; reps.len()];
    for (k, &i) in order.iter().enumerate() {
        new_index[i] = k;
    }
    let mut slots: Vec<Option<CellOrbit>> = reps.into_iter().map(Some).collect();
    order
        .iter()
        .map(|&i| {
            let mut r = slots[i].take().unwrap();
            for a in &mut r.adjacency {
                a.neighbor = new_index[a.neighbor];
            }
            r
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoronoiVertexOrbit {
    pub vertex: QVector,
    pub orbit_size: BigUint,
    pub sq_norm: Rational,
}

impl OrbitSet {
    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn covering_radius_sq(&self) -> Rational {
        covering_radius_sq(self)
    }

    pub fn covering_density(&self) -> f64 {
        covering_density(self)
    }

    /// `(Σ orbit_size · content(D))²`, which equals the Gram determinant when
    /// the orbits tile space.
    pub fn tiling_sum_sq(&self) -> Rational {
        let total: Rational = self
            .representatives
            .iter()
            .map(|r| &Rational::from_bigint(r.orbit_size.clone().into()) * &r.lattice_volume())
            .sum();
        &(&total * &total) * &self.gram.determinant()
    }

    pub fn voronoi_vertex_orbits(&self) -> Vec<VoronoiVertexOrbit> {
        voronoi_vertex_orbits(self)
    }

    /// All vertices of the Voronoi cell of `0`, sorted.
    pub fn voronoi_vertices(&self, cap: usize) -> Result<Vec<QVector>> {
        let mut all: HashSet<QVector> = HashSet::new();
        for o in self.voronoi_vertex_orbits() {
            for v in self.group.orbit_with(&o.vertex, linear_action, cap)? {
                all.insert(v);
            }
        }
        let mut out: Vec<QVector> = all.into_iter().collect();
        out.sort();
        Ok(out)
    }
}

pub fn covering_radius_sq(orbits: &OrbitSet) -> Rational {
    orbits.representatives.iter().map(|r| r.cell.sq_radius.clone()).max().unwrap_or_else(Rational::zero)
}

/// Volume of the unit ball in `Rⁿ`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let mut v = [1.0f64, 2.0];
    for k in 2..=n {
        v = [v[1], 2.0 * std::f64::consts::PI / k as f64 * v[0]];
    }
    if n == 0 {
        1.0
    } else {
        v[1]
    }
}

/// `μⁿ / √det · vol(Bₙ)`.
pub fn covering_density(orbits: &OrbitSet) -> f64 {
    let n = orbits.dim();
    let mu2 = covering_radius_sq(orbits).to_f64();
    let det = orbits.gram.determinant().to_f64();
    mu2.powf(n as f64 / 2.0) / det.sqrt() * unit_ball_volume(n)
}

/// A quarter of the minimal nonzero norm.
pub fn packing_radius_sq(g: &GramForm) -> Rational {
    let bound = (0..g.dim()).map(|i| g.entry(i, i).clone()).min().expect("rank at least one");
    let min = vectors_up_to_norm(g, &bound).into_iter().map(|(_, n)| n).min().expect("basis vectors are within the bound");
    min / Rational::from_integer(4)
}

/// Voronoi vertices `c(D) − v` up to the group, one per stabilizer orbit of
/// vertices `v` of each representative.
pub fn voronoi_vertex_orbits(orbits: &OrbitSet) -> Vec<VoronoiVertexOrbit> {
    let mut out = Vec::new();
    for r in &orbits.representatives {
        let action = r.vertex_action();
        for orb in action.orbits() {
            let v = &r.cell.vertices[orb[0] as usize];
            out.push(VoronoiVertexOrbit {
                vertex: vsub(&r.cell.center, &qvec(v)),
                orbit_size: &r.orbit_size * BigUint::from(orb.len()),
                sq_norm: r.cell.sq_radius.clone(),
            });
        }
    }
    out
}

pub fn total_voronoi_vertices(orbits: &[VoronoiVertexOrbit]) -> BigUint {
    orbits.iter().map(|o| &o.orbit_size).sum()
}

/// Serializable summary of an orbit set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSetReport {
    pub dim: usize,
    pub gram: QMatrix,
    pub gram_det: Rational,
    pub group_order: BigUint,
    pub orbit_count: usize,
    pub covering_radius_sq: Rational,
    pub covering_density_float: f64,
    pub packing_radius_sq: Rational,
    pub cells: Vec<CellReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub vertices: Vec<IVector>,
    pub center: QVector,
    pub sq_radius: Rational,
    pub orbit_size: BigUint,
    pub stabilizer_order: BigUint,
    pub adjacency: Vec<Adjacency>,
}

impl CellReport {
    pub fn cell(&self) -> DeloneCell {
        DeloneCell { vertices: self.vertices.clone(), center: self.center.clone(), sq_radius: self.sq_radius.clone() }
    }
}

impl OrbitSet {
    pub fn report(&self) -> OrbitSetReport {
        OrbitSetReport {
            dim: self.dim(),
            gram: self.gram.matrix().clone(),
            gram_det: self.gram.determinant(),
            group_order: self.group.order(),
            orbit_count: self.len(),
            covering_radius_sq: self.covering_radius_sq(),
            covering_density_float: round_sig(self.covering_density()),
            packing_radius_sq: packing_radius_sq(&self.gram),
            cells: self
                .representatives
                .iter()
                .map(|r| CellReport {
                    vertices: r.cell.vertices.clone(),
                    center: r.cell.center.clone(),
                    sq_radius: r.cell.sq_radius.clone(),
                    orbit_size: r.orbit_size.clone(),
                    stabilizer_order: r.stabilizer_order(),
                    adjacency: r.adjacency.clone(),
                })
                .collect(),
        }
    }
}

// Twelve significant digits keep floating output stable across platforms.
fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn orbit_size_f64(n: &BigUint) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}
