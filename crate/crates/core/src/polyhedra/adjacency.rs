//! Facet orbits of symmetric polytopes by adjacency decomposition.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dd::{dd_full, HFacet};
use super::{AffineFrame, Facet, VPolytope};
use crate::error::{Error, Result};
use crate::linalg::{barycenter, dot, independent_subset, vsub, QMatrix, QVector};
use crate::lp::{LinearProgram, LpStatus};
use crate::rational::Rational;
use crate::symmetry::perm::{orbit, Perm, PermGroup};

/// Point sets up to this size go straight to double description.
pub const DD_VERTEX_THRESHOLD: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetOrbit {
    /// The member with the lexicographically smallest incident set.
    pub representative: Facet,
    pub size: usize,
}

/// Facet orbits of `p` under a group of vertex permutations, which must be
/// induced by affine symmetries of `p`.
pub fn sym_facets(p: &VPolytope, group: &PermGroup, cap: usize) -> Result<Vec<FacetOrbit>> {
    let (frame, coords) = check(p, group)?;
    let orbits = facet_orbits(&coords, group, cap)?;
    Ok(orbits.into_iter().map(|(inc, size)| FacetOrbit { representative: lifted(&frame, &coords, &inc), size }).collect())
}

/// Every facet, expanded from the orbits; agrees with [`super::dd_facets`].
pub fn sym_facets_full(p: &VPolytope, group: &PermGroup, cap: usize) -> Result<Vec<Facet>> {
    let (frame, coords) = check(p, group)?;
    let orbits = facet_orbits(&coords, group, cap)?;
    let mut out = Vec::new();
    for (inc, _) in orbits {
        for s in orbit(group.generators(), inc, |g: &Perm, s: &Vec<u32>| g.apply_set(s), cap)?.points {
            out.push(lifted(&frame, &coords, &s));
        }
    }
    out.sort_by(|a, b| a.incident.cmp(&b.incident));
    Ok(out)
}

fn check(p: &VPolytope, group: &PermGroup) -> Result<(AffineFrame, Vec<QVector>)> {
    if group.degree() != p.vertices().len() {
        return Err(Error::DimensionMismatch { expected: p.vertices().len(), found: group.degree() });
    }
    if p.affine_dim() == 0 {
        return Err(Error::Degenerate("polytope is a single point".into()));
    }
    let (frame, coords) = p.hull_coordinates();
    for g in group.generators() {
        if !is_affine_symmetry(&coords, g) {
            return Err(Error::Invalid("vertex permutation is not induced by an affine map".into()));
        }
    }
    Ok((frame, coords))
}

fn is_affine_symmetry(coords: &[QVector], g: &Perm) -> bool {
    let x0 = &coords[0];
    let diffs: Vec<QVector> = coords.iter().map(|x| vsub(x, x0)).collect();
    let idx = independent_subset(&diffs);
    let img0 = &coords[g.apply(0) as usize];
    let src = QMatrix::from_columns(&idx.iter().map(|&j| diffs[j].clone()).collect::<Vec<_>>());
    let dst = QMatrix::from_columns(&idx.iter().map(|&j| vsub(&coords[g.apply(j as u32) as usize], img0)).collect::<Vec<_>>());
    let Ok(inv) = src.inverse() else { return false };
    let m = dst.mul(&inv);
    coords.iter().enumerate().all(|(i, x)| {
        let y: QVector = m.mul_vec(&vsub(x, x0)).iter().zip(img0).map(|(a, b)| a + b).collect();
        y == coords[g.apply(i as u32) as usize]
    })
}

fn lifted(frame: &AffineFrame, coords: &[QVector], inc: &[u32]) -> Facet {
    let (a, b) = hyperplane_through(coords, inc);
    let (a, b) = frame.lift_inequality(&a, &b);
    let (normal, offset) = HFacet::canonical(a, b);
    Facet { normal, offset, incident: inc.iter().map(|&i| i as usize).collect() }
}

/// The valid inequality `a·x ≤ β` tight exactly on a facet's points, in
/// full-dimensional coordinates.
fn hyperplane_through(coords: &[QVector], inc: &[u32]) -> (QVector, Rational) {
    let rows: Vec<QVector> = inc.iter().map(|&i| homog_row(&coords[i as usize])).collect();
    let ns = QMatrix::from_rows(rows).nullspace();
    assert_eq!(ns.len(), 1, "incident set does not span a hyperplane");
    orient(coords, split(&ns[0]), inc)
}

fn homog_row(x: &[Rational]) -> QVector {
    let mut r = x.to_vec();
    r.push(-Rational::one());
    r
}

fn split(v: &[Rational]) -> (QVector, Rational) {
    let k = v.len() - 1;
    (v[..k].to_vec(), v[k].clone())
}

/// Flips the sign so that points outside `zero` have positive slack.
fn orient(coords: &[QVector], (a, b): (QVector, Rational), zero: &[u32]) -> (QVector, Rational) {
    let probe = (0..coords.len() as u32).find(|i| zero.binary_search(i).is_err()).expect("proper face");
    if (&b - &dot(&a, &coords[probe as usize])).is_negative() {
        (a.iter().map(|x| -x).collect(), -b)
    } else {
        (a, b)
    }
}

fn tight_set(coords: &[QVector], a: &[Rational], b: &Rational) -> Vec<u32> {
    (0..coords.len() as u32).filter(|&i| dot(a, &coords[i as usize]) == *b).collect()
}

/// Incident sets of facet orbit representatives with orbit sizes, sorted.
pub(crate) fn facet_orbits(points: &[QVector], group: &PermGroup, cap: usize) -> Result<Vec<(Vec<u32>, usize)>> {
    facet_orbits_with(points, group, cap, DD_VERTEX_THRESHOLD)
}

fn facet_orbits_with(points: &[QVector], group: &PermGroup, cap: usize, threshold: usize) -> Result<Vec<(Vec<u32>, usize)>> {
    let frame = AffineFrame::of(points);
    let coords: Vec<QVector> = points.iter().map(|x| frame.coords(x)).collect();
    let k = frame.dim();
    let act = |g: &Perm, s: &Vec<u32>| g.apply_set(s);
    if k <= 2 || points.len() <= threshold || group.is_trivial() {
        let all: Vec<Vec<u32>> = dd_full(&coords).into_iter().map(|h| h.incident).collect();
        let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
        let mut out = Vec::new();
        for f in all {
            if seen.contains_key(&f) {
                continue;
            }
            let orb = orbit(group.generators(), f, act, cap)?;
            let rep = orb.points.iter().min().unwrap().clone();
            for s in &orb.points {
                seen.insert(s.clone(), ());
            }
            out.push((rep, orb.len()));
        }
        out.sort();
        return Ok(out);
    }

    let first = initial_facet(&coords);
    let mut known: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut reps: Vec<(Vec<u32>, usize)> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let register = |s: Vec<u32>, known: &mut HashMap<Vec<u32>, usize>, reps: &mut Vec<(Vec<u32>, usize)>| -> Result<Option<usize>> {
        if known.contains_key(&s) {
            return Ok(None);
        }
        let orb = orbit(group.generators(), s, act, cap)?;
        let id = reps.len();
        for x in &orb.points {
            known.insert(x.clone(), id);
        }
        if known.len() > cap {
            return Err(Error::OrbitCap(cap));
        }
        reps.push((orb.points.iter().min().unwrap().clone(), orb.len()));
        Ok(Some(id))
    };
    if let Some(id) = register(first, &mut known, &mut reps)? {
        queue.push_back(id);
    }
    while let Some(id) = queue.pop_front() {
        let f = reps[id].0.clone();
        let (a, beta) = hyperplane_through(&coords, &f);
        let (_, stab) = group.set_stabilizer(&f, cap)?;
        let local = stab.restrict(&f)?;
        let sub: Vec<QVector> = f.iter().map(|&i| coords[i as usize].clone()).collect();
        for (ridge_local, _) in facet_orbits_with(&sub, &local, cap, threshold)? {
            let ridge: Vec<u32> = ridge_local.iter().map(|&j| f[j as usize]).collect();
            let g = wrap(&coords, &a, &beta, &f, &ridge);
            if let Some(nid) = register(g, &mut known, &mut reps)? {
                queue.push_back(nid);
            }
        }
    }
    reps.sort();
    Ok(reps)
}

/// A facet of the polar, found by maximizing a pseudo-random objective.
fn initial_facet(coords: &[QVector]) -> Vec<u32> {
    let k = coords[0].len();
    let b = barycenter(coords);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let c: QVector = (0..k).map(|_| Rational::from_integer(rng.gen_range(-1000..=1000))).collect();
    let mut lp = LinearProgram::new(c);
    for x in coords {
        lp.push(vsub(x, &b), Rational::one());
    }
    let out = lp.maximize();
    assert_eq!(out.status, LpStatus::Optimal, "polar of a full-dimensional polytope is bounded");
    let y = out.vertex.unwrap();
    let offset = &Rational::one() + &dot(&y, &b);
    tight_set(coords, &y, &offset)
}

/// The facet sharing `ridge` with the facet `a·x ≤ β`, by rotating a
/// hyperplane through the ridge until it meets another point.
fn wrap(coords: &[QVector], a: &[Rational], beta: &Rational, facet: &[u32], ridge: &[u32]) -> Vec<u32> {
    let rows: Vec<QVector> = ridge.iter().map(|&i| homog_row(&coords[i as usize])).collect();
    let mut fa = a.to_vec();
    fa.push(-beta.clone());
    let ns = QMatrix::from_rows(rows).nullspace();
    let other = ns
        .iter()
        .find(|v| QMatrix::from_rows(vec![(*v).clone(), fa.clone()]).rank() == 2)
        .expect("ridge has codimension two");
    let (bn, gamma) = split(other);
    let inside = facet.iter().copied().find(|i| ridge.binary_search(i).is_err()).expect("ridge is proper");
    let (bn, gamma) = if (&gamma - &dot(&bn, &coords[inside as usize])).is_negative() {
        (bn.iter().map(|x| -x).collect::<QVector>(), -gamma)
    } else {
        (bn, gamma)
    };
    let mut best: Option<Rational> = None;
    for (i, x) in coords.iter().enumerate() {
        if facet.binary_search(&(i as u32)).is_ok() {
            continue;
        }
        let t = (&dot(&bn, x) - &gamma) / (&dot(a, x) - beta);
        if best.as_ref().map_or(true, |b| t < *b) {
            best = Some(t);
        }
    }
    let t = best.expect("polytope is not a single facet");
    let n: QVector = bn.iter().zip(a).map(|(x, y)| x - &(&t * y)).collect();
    let off = &gamma - &(&t * beta);
    tight_set(coords, &n, &off)
}

#[cfg(test)]
mod tests {
    use super::super::dd_facets;
    use super::*;
    use crate::linalg::qvec;
    use num_bigint::BigUint;

    fn hypercube(n: usize) -> (VPolytope, PermGroup) {
        let pts: Vec<Vec<i64>> = (0..1usize << n).map(|m| (0..n).map(|j| if m >> j & 1 == 1 { 1 } else { -1 }).collect()).collect();
        let p = VPolytope::from_i64(&pts).unwrap();
        let mut gens = Vec::new();
        // Coordinate flips and transpositions, acting on bit masks.
        for j in 0..n {
            gens.push(Perm::from_images((0..1u32 << n).map(|m| m ^ (1 << j)).collect()).unwrap());
        }
        for j in 0..n - 1 {
            let swap = |m: u32| {
                let (a, b) = (m >> j & 1, m >> (j + 1) & 1);
                (m & !(3 << j)) | (a << (j + 1)) | (b << j)
            };
            gens.push(Perm::from_images((0..1u32 << n).map(swap).collect()).unwrap());
        }
        let g = PermGroup::new(1 << n, gens).unwrap();
        (p, g)
    }

    #[test]
    fn six_cube_orbits() {
        let (p, g) = hypercube(6);
        assert_eq!(g.order(), BigUint::from(46080u32));
        let orbits = sym_facets(&p, &g, 1_000_000).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].size, 12);
        assert_eq!(sym_facets_full(&p, &g, 1_000_000).unwrap(), dd_facets(&p));
    }

    fn twenty_four_cell() -> Vec<QVector> {
        let mut pts = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                for si in [1, -1] {
                    for sj in [1, -1] {
                        let mut v = vec![0; 4];
                        v[i] = si;
                        v[j] = sj;
                        pts.push(qvec(&v));
                    }
                }
            }
        }
        pts
    }

    #[test]
    fn twenty_four_cell_facets() {
        let pts = twenty_four_cell();
        let p = VPolytope::new(pts.clone()).unwrap();
        let dd = dd_facets(&p);
        assert_eq!(dd.len(), 24);
        assert!(dd.iter().all(|f| f.incident.len() == 6));
        // Signed permutations of coordinates.
        let mut mats = Vec::new();
        for j in 0..4 {
            let mut d = QMatrix::identity(4).to_rows();
            d[j][j] = -Rational::one();
            mats.push(QMatrix::from_rows(d));
        }
        for j in 0..3 {
            let mut rows = QMatrix::identity(4).to_rows();
            rows.swap(j, j + 1);
            mats.push(QMatrix::from_rows(rows));
        }
        let grp = crate::symmetry::MatrixGroup::new(4, &mats, pts.clone()).unwrap().permutation_action(&pts).unwrap();
        assert_eq!(grp.order(), BigUint::from(384u32));
        // The signed permutations split the 24 octahedra into 8 + 16.
        let orbits = sym_facets(&p, &grp, 1_000_000).unwrap();
        let mut sizes: Vec<usize> = orbits.iter().map(|o| o.size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![8, 16]);
        assert_eq!(sym_facets_full(&p, &grp, 1_000_000).unwrap(), dd);
        let (_, coords) = p.hull_coordinates();
        let forced = facet_orbits_with(&coords, &grp, 1_000_000, 4).unwrap();
        assert_eq!(forced, facet_orbits_with(&coords, &grp, 1_000_000, 1000).unwrap());
    }

    #[test]
    fn rejects_non_affine_permutations() {
        let p = VPolytope::from_i64(&[vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1]]).unwrap();
        let g = PermGroup::new(4, vec![Perm::from_cycle(4, &[0, 1])]).unwrap();
        assert!(sym_facets(&p, &g, 100).is_err());
    }
}
