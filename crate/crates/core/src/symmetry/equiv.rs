//! Equivalence of Delone cells: barycenter classes modulo the lattice and
//! isometries of finite metric spaces.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cvp::closest_vectors;
use crate::error::Result;
use crate::linalg::{common_denominator, independent_subset, qvec, vfract, GramForm, IVector, QMatrix, QVector};
use crate::rational::Rational;

use super::group::{mod_one_action, MatrixGroup};

pub const DEFAULT_ORBIT_CAP: usize = 10_000_000;

/// A point of `Rⁿ/L` in lattice coordinates, reduced into `[0,1)ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaryClass {
    pub coords: QVector,
    pub denominator: BigInt,
    /// Squared distance to the nearest lattice point; an isometry invariant.
    pub lattice_distance: Rational,
}

impl BaryClass {
    pub fn new(g: &GramForm, point: &[Rational]) -> Self {
        let coords = vfract(point);
        let denominator = common_denominator(&coords);
        let lattice_distance = closest_vectors(g, &coords).min_sq_dist;
        BaryClass { coords, denominator, lattice_distance }
    }

    fn profile(&self) -> (&BigInt, &Rational) {
        (&self.denominator, &self.lattice_distance)
    }

    /// Multipliers `d/e` for the prime-divisor chain `e₁ | e₂ | … | d`, coarsest first.
    pub fn divisor_chain(&self) -> Vec<BigInt> {
        let d = &self.denominator;
        let mut primes = Vec::new();
        let mut m = d.clone();
        let mut p = BigInt::from(2);
        while &p * &p <= m {
            while (&m % &p).is_zero() {
                primes.push(p.clone());
                m /= &p;
            }
            p += 1;
        }
        if !m.is_one() {
            primes.push(m);
        }
        let mut e = BigInt::one();
        primes
            .into_iter()
            .map(|p| {
                e *= p;
                d / &e
            })
            .collect()
    }
}

fn scaled_class(v: &QVector, k: &BigInt) -> QVector {
    let k = Rational::from_bigint(k.clone());
    vfract(&v.iter().map(|x| x * &k).collect::<Vec<_>>())
}

/// Stabilizer of a class mod 1, refined along the divisor chain of its denominator.
/// Returns the orbit length together with the stabilizer.
pub fn stabilizer_mod_one(group: &MatrixGroup, b: &BaryClass, cap: usize) -> Result<(num_bigint::BigUint, MatrixGroup)> {
    let mut h = group.clone();
    for k in b.divisor_chain() {
        let x = scaled_class(&b.coords, &k);
        let (_, s) = h.stabilizer_with(&x, mod_one_action, cap)?;
        h = s;
    }
    let len = group.order() / h.order();
    Ok((len, h))
}

/// A group element `A` with `A·b1 ≡ b2 (mod 1)`, or `None`.
pub fn barycenter_equivalent(group: &MatrixGroup, b1: &BaryClass, b2: &BaryClass, cap: usize) -> Result<Option<QMatrix>> {
    let n = group.dim();
    if b1.coords == b2.coords {
        return Ok(Some(QMatrix::identity(n)));
    }
    if b1.profile() != b2.profile() {
        return Ok(None);
    }
    // Search coset by coset: fix the coarse class first, then refine inside its stabilizer.
    let mut h = group.clone();
    let mut witness = QMatrix::identity(n);
    let mut target = b2.coords.clone();
    for k in b1.divisor_chain() {
        let x = scaled_class(&b1.coords, &k);
        let t = scaled_class(&target, &k);
        let Some(a) = h.find_mapping(&x, &t, mod_one_action, cap)? else {
            return Ok(None);
        };
        let inv = a.inverse()?;
        target = vfract(&inv.mul_vec(&target));
        witness = witness.mul(&a);
        h = h.stabilizer_with(&x, mod_one_action, cap)?.1;
    }
    debug_assert_eq!(mod_one_action(&witness, &b1.coords), b2.coords);
    Ok(Some(witness))
}

/// An affine isometry `x ↦ A·x + t` of the lattice with `A` unimodular and
/// Gram-preserving and `t` integral, mapping one vertex set onto another.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineWitness {
    pub linear: QMatrix,
    pub shift: QVector,
}

impl AffineWitness {
    pub fn identity(n: usize) -> Self {
        AffineWitness { linear: QMatrix::identity(n), shift: vec![Rational::zero(); n] }
    }

    pub fn apply(&self, v: &[Rational]) -> QVector {
        self.linear.mul_vec(v).iter().zip(&self.shift).map(|(a, b)| a + b).collect()
    }

    pub fn apply_int(&self, v: &[i64]) -> IVector {
        self.apply(&qvec(v)).iter().map(|x| x.to_i64().expect("integral image")).collect()
    }

    pub fn compose(&self, inner: &AffineWitness) -> AffineWitness {
        AffineWitness { linear: self.linear.mul(&inner.linear), shift: self.apply(&inner.shift) }
    }

    pub fn inverse(&self) -> AffineWitness {
        let inv = self.linear.inverse().expect("isometries are invertible");
        let shift = inv.mul_vec(&self.shift).iter().map(|x| -x).collect();
        AffineWitness { linear: inv, shift }
    }
}

/// Squared-distance matrix of a vertex set under `g`.
fn distance_matrix(g: &GramForm, vs: &[IVector]) -> Vec<Vec<Rational>> {
    vs.iter()
        .map(|u| {
            vs.iter()
                .map(|v| {
                    let d: IVector = u.iter().zip(v).map(|(a, b)| a - b).collect();
                    g.norm_int(&d)
                })
                .collect()
        })
        .collect()
}

/// Search for a lattice isometry between two full-dimensional vertex sets by
/// backtracking over distance-preserving vertex bijections.
pub fn metric_isomorphism(g: &GramForm, a: &[IVector], b: &[IVector]) -> Option<AffineWitness> {
    let n = g.dim();
    if a.len() != b.len() || a.is_empty() {
        return None;
    }
    let da = distance_matrix(g, a);
    let db = distance_matrix(g, b);
    let inv = |d: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
        d.iter()
            .map(|row| {
                let mut r = row.clone();
                r.sort();
                r
            })
            .collect()
    };
    let (ia, ib) = (inv(&da), inv(&db));
    let mut sa = ia.clone();
    let mut sb = ib.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    // Map an affine basis of `a` first; the remaining images are then forced.
    let diffs: Vec<QVector> = a.iter().map(|v| qvec(&v.iter().zip(&a[0]).map(|(x, y)| x - y).collect::<Vec<_>>())).collect();
    let mut order = vec![0];
    order.extend(independent_subset(&diffs[1..]).into_iter().map(|i| i + 1));
    if order.len() != n + 1 {
        return None;
    }
    let bindex: HashMap<&IVector, usize> = b.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = vec![false; b.len()];
    backtrack(g, a, b, &da, &db, &ia, &ib, &order, &bindex, &mut chosen, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    g: &GramForm,
    a: &[IVector],
    b: &[IVector],
    da: &[Vec<Rational>],
    db: &[Vec<Rational>],
    ia: &[Vec<Rational>],
    ib: &[Vec<Rational>],
    order: &[usize],
    bindex: &HashMap<&IVector, usize>,
    chosen: &mut Vec<usize>,
    used: &mut [bool],
) -> Option<AffineWitness> {
    let k = chosen.len();
    if k == order.len() {
        return affine_from_basis(g, a, b, order, chosen, bindex);
    }
    let src = order[k];
    for cand in 0..b.len() {
        if used[cand] || ia[src] != ib[cand] {
            continue;
        }
        if (0..k).any(|j| da[src][order[j]] != db[cand][chosen[j]]) {
            continue;
        }
        used[cand] = true;
        chosen.push(cand);
        if let Some(w) = backtrack(g, a, b, da, db, ia, ib, order, bindex, chosen, used) {
            return Some(w);
        }
        chosen.pop();
        used[cand] = false;
    }
    None
}

fn affine_from_basis(
    g: &GramForm,
    a: &[IVector],
    b: &[IVector],
    order: &[usize],
    chosen: &[usize],
    bindex: &HashMap<&IVector, usize>,
) -> Option<AffineWitness> {
    let n = g.dim();
    let src0 = qvec(&a[order[0]]);
    let dst0 = qvec(&b[chosen[0]]);
    let sd: Vec<QVector> = order[1..].iter().map(|&i| crate::linalg::vsub(&qvec(&a[i]), &src0)).collect();
    let dd: Vec<QVector> = chosen[1..].iter().map(|&i| crate::linalg::vsub(&qvec(&b[i]), &dst0)).collect();
    let s = QMatrix::from_columns(&sd);
    let d = QMatrix::from_columns(&dd);
    let lin = d.mul(&s.inverse().ok()?);
    if !lin.entries().iter().all(Rational::is_integer) || lin.transpose().mul(g.matrix()).mul(&lin) != *g.matrix() {
        return None;
    }
    let shift = crate::linalg::vsub(&dst0, &lin.mul_vec(&src0));
    if !shift.iter().all(Rational::is_integer) {
        return None;
    }
    let w = AffineWitness { linear: lin, shift };
    let mut hit = vec![false; b.len()];
    for v in a {
        let img: Option<IVector> = w.apply(&qvec(v)).iter().map(|x| x.to_i64()).collect();
        let j = *bindex.get(&img?)?;
        if hit[j] {
            return None;
        }
        hit[j] = true;
    }
    debug_assert_eq!(w.linear.rows(), n);
    Some(w)
}

/// Whether a rational point is integral.
pub fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_integer)
}

/// Lattice vector from an integral rational vector.
pub fn to_lattice(v: &[Rational]) -> Option<IVector> {
    v.iter().map(|x| if x.is_integer() { x.to_i64() } else { None }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::symmetry::auto::automorphism_group;
    use num_bigint::BigUint;

    #[test]
    fn divisor_chain_increasing() {
        let g = GramForm::identity(2);
        let b = BaryClass::new(&g, &[q(1, 6), q(5, 12)]);
        assert_eq!(b.denominator, BigInt::from(12));
        assert_eq!(b.divisor_chain(), vec![BigInt::from(6), BigInt::from(3), BigInt::from(1)]);
    }

    #[test]
    fn square_lattice_classes() {
        let g = GramForm::identity(2);
        let grp = automorphism_group(&g).unwrap();
        let half0 = BaryClass::new(&g, &[q(1, 2), q(0, 1)]);
        let half1 = BaryClass::new(&g, &[q(0, 1), q(1, 2)]);
        let hh = BaryClass::new(&g, &[q(1, 2), q(1, 2)]);
        let id = barycenter_equivalent(&grp, &half0, &half0, 100).unwrap().unwrap();
        assert_eq!(id, QMatrix::identity(2));
        let w = barycenter_equivalent(&grp, &half0, &half1, 100).unwrap().unwrap();
        assert_eq!(mod_one_action(&w, &half0.coords), half1.coords);
        assert!(barycenter_equivalent(&grp, &half0, &hh, 100).unwrap().is_none());
        let (len, stab) = stabilizer_mod_one(&grp, &half0, 100).unwrap();
        assert_eq!(len, BigUint::from(2u32));
        assert_eq!(stab.order(), BigUint::from(4u32));
    }

    #[test]
    fn chained_witness_for_mixed_denominators() {
        let g = GramForm::identity(3);
        let grp = automorphism_group(&g).unwrap();
        let b1 = BaryClass::new(&g, &[q(1, 2), q(1, 3), q(0, 1)]);
        let b2 = BaryClass::new(&g, &[q(0, 1), q(2, 3), q(1, 2)]);
        let w = barycenter_equivalent(&grp, &b1, &b2, 1000).unwrap().unwrap();
        assert_eq!(mod_one_action(&w, &b1.coords), b2.coords);
        let (len, stab) = stabilizer_mod_one(&grp, &b1, 1000).unwrap();
        assert_eq!(&len * stab.order(), grp.order());
        // (1/2, 1/3, 0): x₁ ↦ −x₁ and x₃ ↦ −x₃ fix it; nothing else does.
        assert_eq!(stab.order(), BigUint::from(4u32));
    }

    #[test]
    fn metric_isomorphism_examples() {
        let g = GramForm::identity(2);
        let sq = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let w = metric_isomorphism(&g, &sq, &sq).unwrap();
        for v in &sq {
            assert!(sq.contains(&w.apply_int(v)));
        }
        let shifted: Vec<IVector> = sq.iter().map(|v| vec![v[0] + 1, v[1]]).collect();
        let w = metric_isomorphism(&g, &sq, &shifted).unwrap();
        assert_eq!(w.linear, QMatrix::identity(2));
        assert_eq!(w.shift, qvec(&[1, 0]));
        let rect = vec![vec![0, 0], vec![2, 0], vec![0, 1], vec![2, 1]];
        assert!(metric_isomorphism(&g, &sq, &rect).is_none());
    }
}
