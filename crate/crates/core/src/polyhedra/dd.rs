//! Double description for full-dimensional point sets.

use fixedbitset::FixedBitSet;

use crate::linalg::{dot, independent_subset, primitive_integer, QMatrix, QVector};
use crate::rational::Rational;

/// A facet inequality `normal·x ≤ offset` of a full-dimensional point set,
/// with the indices of the points on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HFacet {
    pub normal: QVector,
    pub offset: Rational,
    pub incident: Vec<u32>,
}

impl HFacet {
    /// Rescales by a positive factor so the normal is a primitive integer vector.
    pub fn canonical(normal: QVector, offset: Rational) -> (QVector, Rational) {
        let prim = primitive_integer(&normal);
        let k = normal.iter().zip(&prim).find(|(a, _)| !a.is_zero()).map(|(a, b)| b / a).unwrap_or_else(Rational::one);
        (prim, &offset * &k)
    }

    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.offset - &dot(&self.normal, x)
    }
}

struct Ray {
    y: QVector,
    zero: FixedBitSet,
}

fn homogenize(v: &[Rational]) -> QVector {
    let mut h = Vec::with_capacity(v.len() + 1);
    h.push(Rational::one());
    h.extend_from_slice(v);
    h
}

/// Facets of `conv(points)`; the points must affinely span `Rᵏ`, `k = points[0].len()`.
///
/// Extreme rays of the cone `{y : y·(1, v) ≥ 0}` are computed by inserting
/// the constraints in lexicographic order of the points.
pub fn dd_full(points: &[QVector]) -> Vec<HFacet> {
    let m = points.len();
    let k = points[0].len();
    let d = k + 1;
    if k == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]).then(a.cmp(&b)));
    let homog: Vec<QVector> = points.iter().map(|p| homogenize(p)).collect();
    let ordered: Vec<QVector> = order.iter().map(|&i| homog[i].clone()).collect();
    let init: Vec<usize> = independent_subset(&ordered).into_iter().map(|j| order[j]).collect();
    assert_eq!(init.len(), d, "point set is not full-dimensional");

    let p = QMatrix::from_rows(init.iter().map(|&i| homog[i].clone()).collect());
    let pinv = p.inverse().expect("independent rows");
    let mut rays: Vec<Ray> = (0..d)
        .map(|r| {
            let mut zero = FixedBitSet::with_capacity(m);
            for (j, &i) in init.iter().enumerate() {
                if j != r {
                    zero.insert(i);
                }
            }
            Ray { y: primitive_integer(&pinv.column(r)), zero }
        })
        .collect();

    let mut done = FixedBitSet::with_capacity(m);
    for &i in &init {
        done.insert(i);
    }
    for &i in &order {
        if done.contains(i) {
            continue;
        }
        done.insert(i);
        let h = &homog[i];
        let s: Vec<Rational> = rays.iter().map(|r| dot(&r.y, h)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| s[r].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| s[r].is_negative()).collect();
        if neg.is_empty() {
            for (r, ray) in rays.iter_mut().enumerate() {
                if s[r].is_zero() {
                    ray.zero.insert(i);
                }
            }
            continue;
        }
        let mut fresh: Vec<Ray> = Vec::new();
        for &a in &pos {
            for &b in &neg {
                let mut common = rays[a].zero.clone();
                common.intersect_with(&rays[b].zero);
                if common.count_ones(..) + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|r| r == a || r == b || !common.is_subset(&rays[r].zero));
                if !adjacent {
                    continue;
                }
                let y: QVector =
                    rays[b].y.iter().zip(&rays[a].y).map(|(yb, ya)| &(&s[a] * yb) - &(&s[b] * ya)).collect();
                common.insert(i);
                fresh.push(Ray { y: primitive_integer(&y), zero: common });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (r, mut ray) in rays.into_iter().enumerate() {
            if s[r].is_negative() {
                continue;
            }
            if s[r].is_zero() {
                ray.zero.insert(i);
            }
            kept.push(ray);
        }
        kept.extend(fresh);
        rays = kept;
    }

    let mut facets: Vec<HFacet> = rays
        .into_iter()
        .map(|r| {
            let normal: QVector = r.y[1..].iter().map(|x| -x).collect();
            let (normal, offset) = HFacet::canonical(normal, r.y[0].clone());
            HFacet { normal, offset, incident: r.zero.ones().map(|i| i as u32).collect() }
        })
        .collect();
    facets.sort_by(|a, b| a.incident.cmp(&b.incident));
    facets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec;
    use crate::rational::q;

    #[test]
    fn square() {
        let pts = vec![qvec(&[1, 1]), qvec(&[-1, 1]), qvec(&[1, -1]), qvec(&[-1, -1])];
        let f = dd_full(&pts);
        assert_eq!(f.len(), 4);
        for h in &f {
            assert_eq!(h.offset, q(1, 1));
            assert_eq!(h.incident.len(), 2);
        }
    }

    #[test]
    fn simplex_with_interior_point() {
        let pts = vec![qvec(&[0, 0, 0]), qvec(&[1, 0, 0]), qvec(&[0, 1, 0]), qvec(&[0, 0, 1]), vec![q(1, 5), q(1, 5), q(1, 5)]];
        let f = dd_full(&pts);
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|h| !h.incident.contains(&4)));
    }

    #[test]
    fn cross_polytope_and_cube() {
        let mut cross = Vec::new();
        for j in 0..4 {
            for s in [1, -1] {
                let mut e = vec![0; 4];
                e[j] = s;
                cross.push(qvec(&e));
            }
        }
        assert_eq!(dd_full(&cross).len(), 16);
        let cube: Vec<QVector> = (0..16).map(|m| qvec(&(0..4).map(|j| ((m >> j) & 1) as i64).collect::<Vec<_>>())).collect();
        let f = dd_full(&cube);
        assert_eq!(f.len(), 8);
        assert!(f.iter().all(|h| h.incident.len() == 8));
    }
}
