//! Finite matrix groups, carried by a faithful permutation representation.

use std::collections::HashMap;

use num_bigint::BigUint;

use super::perm::{orbit, Perm, PermGroup};
use crate::error::{Error, Result};
use crate::linalg::{independent_subset, vfract, QMatrix, QVector};

/// A finite group of invertible rational matrices acting on column vectors.
///
/// The group is stored through its action on a finite spanning set of
/// points (`domain`), which makes orders and memberships exact permutation
/// group computations; matrices are recovered from permutations on demand.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    dim: usize,
    domain: Vec<QVector>,
    index: HashMap<QVector, u32>,
    basis: Vec<usize>,
    basis_inv: QMatrix,
    perms: PermGroup,
    gens: Vec<QMatrix>,
}

impl MatrixGroup {
    /// `domain` must span and be invariant under every generator.
    pub fn new(dim: usize, gens: &[QMatrix], domain: Vec<QVector>) -> Result<Self> {
        let mut g = Self::trivial(dim, domain)?;
        for a in gens {
            g.add_generator(a)?;
        }
        Ok(g)
    }

    pub fn trivial(dim: usize, domain: Vec<QVector>) -> Result<Self> {
        let basis = independent_subset(&domain);
        if basis.len() != dim || domain.iter().any(|v| v.len() != dim) {
            return Err(Error::Degenerate("group domain does not span the space".into()));
        }
        let cols: Vec<QVector> = basis.iter().map(|&i| domain[i].clone()).collect();
        let basis_inv = QMatrix::from_columns(&cols).inverse()?;
        let index = domain.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect();
        let degree = domain.len();
        Ok(MatrixGroup { dim, domain, index, basis, basis_inv, perms: PermGroup::trivial(degree), gens: Vec::new() })
    }

    /// Adds a generator; returns false if it was already in the group.
    pub fn add_generator(&mut self, a: &QMatrix) -> Result<bool> {
        let p = self
            .perm_of(a)
            .ok_or_else(|| Error::Invalid("matrix does not permute the group domain".into()))?;
        if self.perms.add_generator(p) {
            self.gens.push(a.clone());
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn from_perms(&self, perms: PermGroup) -> Self {
        let gens = perms.generators().iter().map(|p| self.matrix_of(p)).collect();
        MatrixGroup {
            dim: self.dim,
            domain: self.domain.clone(),
            index: self.index.clone(),
            basis: self.basis.clone(),
            basis_inv: self.basis_inv.clone(),
            perms,
            gens,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[QMatrix] {
        &self.gens
    }

    pub fn perm_group(&self) -> &PermGroup {
        &self.perms
    }

    pub fn domain(&self) -> &[QVector] {
        &self.domain
    }

    pub fn order(&self) -> BigUint {
        self.perms.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.is_trivial()
    }

    pub fn perm_of(&self, a: &QMatrix) -> Option<Perm> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return None;
        }
        let imgs: Option<Vec<u32>> = self.domain.iter().map(|v| self.index.get(&a.mul_vec(v)).copied()).collect();
        Perm::from_images(imgs?).ok()
    }

    pub fn matrix_of(&self, p: &Perm) -> QMatrix {
        let cols: Vec<QVector> = self.basis.iter().map(|&i| self.domain[p.apply(i as u32) as usize].clone()).collect();
        QMatrix::from_columns(&cols).mul(&self.basis_inv)
    }

    pub fn contains(&self, a: &QMatrix) -> bool {
        self.perm_of(a).is_some_and(|p| self.perms.contains(&p))
    }

    /// All elements as matrices; refuses groups above `limit` elements.
    pub fn elements(&self, limit: u64) -> Result<Vec<QMatrix>> {
        match self.perms.order_u64() {
            Some(o) if o <= limit => Ok(self.perms.elements().iter().map(|p| self.matrix_of(p)).collect()),
            _ => Err(Error::SizeLimit(format!("group of order {} exceeds {limit} elements", self.order()))),
        }
    }

    /// Orbit of a point under a given action of the generators.
    pub fn orbit_with<T, F>(&self, x: &T, act: F, cap: usize) -> Result<Vec<T>>
    where
        T: Clone + Eq + std::hash::Hash,
        F: Fn(&QMatrix, &T) -> T,
    {
        Ok(orbit(&self.gens, x.clone(), act, cap)?.points)
    }

    /// Orbit and stabilizer of a point under a given action.
    pub fn stabilizer_with<T, F>(&self, x: &T, act: F, cap: usize) -> Result<(Vec<T>, MatrixGroup)>
    where
        T: Clone + Eq + std::hash::Hash,
        F: Fn(&QMatrix, &T) -> T,
    {
        let perm_gens = self.perms.generators();
        let orb = orbit(&self.gens, x.clone(), &act, cap)?;
        let target = self.order() / BigUint::from(orb.len());
        let degree = self.perms.degree();
        let mut stab = PermGroup::trivial(degree);
        if target != BigUint::from(1u32) {
            'done: for k in 0..orb.len() {
                let uk = orb.transversal(k, perm_gens, degree);
                for (gi, g) in self.gens.iter().enumerate() {
                    let m = orb.index[&act(g, &orb.points[k])];
                    let um = orb.transversal(m, perm_gens, degree);
                    let sg = um.inverse().compose(&perm_gens[gi].compose(&uk));
                    if stab.add_generator(sg) && stab.order() == target {
                        break 'done;
                    }
                }
            }
        }
        Ok((orb.points, self.from_perms(stab)))
    }

    /// An element `a` with `act(a, x) = y`, if any.
    pub fn find_mapping<T, F>(&self, x: &T, y: &T, act: F, cap: usize) -> Result<Option<QMatrix>>
    where
        T: Clone + Eq + std::hash::Hash,
        F: Fn(&QMatrix, &T) -> T,
    {
        let orb = orbit(&self.gens, x.clone(), &act, cap)?;
        Ok(orb.index.get(y).map(|&k| {
            let p = orb.transversal(k, self.perms.generators(), self.perms.degree());
            self.matrix_of(&p)
        }))
    }

    /// Action on index sets of a point list invariant under the group.
    pub fn permutation_action(&self, points: &[QVector]) -> Result<PermGroup> {
        let index: HashMap<&QVector, u32> = points.iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
        let mut gens = Vec::new();
        for a in &self.gens {
            let imgs: Option<Vec<u32>> = points.iter().map(|v| index.get(&a.mul_vec(v)).copied()).collect();
            gens.push(Perm::from_images(imgs.ok_or_else(|| Error::Invalid("point set is not invariant".into()))?)?);
        }
        PermGroup::new(points.len(), gens)
    }
}

/// Action of a matrix on vectors.
pub fn linear_action(a: &QMatrix, v: &QVector) -> QVector {
    a.mul_vec(v)
}

/// Action of a matrix on classes modulo the integer lattice, represented in `[0,1)ⁿ`.
pub fn mod_one_action(a: &QMatrix, v: &QVector) -> QVector {
    vfract(&a.mul_vec(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec;
    use crate::rational::q;

    fn square_group() -> MatrixGroup {
        let dom = vec![qvec(&[1, 0]), qvec(&[-1, 0]), qvec(&[0, 1]), qvec(&[0, -1])];
        let rot = QMatrix::from_i64_rows(&[vec![0, -1], vec![1, 0]]);
        let refl = QMatrix::from_i64_rows(&[vec![1, 0], vec![0, -1]]);
        MatrixGroup::new(2, &[rot, refl], dom).unwrap()
    }

    #[test]
    fn order_and_elements() {
        let g = square_group();
        assert_eq!(g.order(), BigUint::from(8u32));
        let els = g.elements(100).unwrap();
        assert_eq!(els.len(), 8);
        assert!(els.contains(&QMatrix::identity(2)));
        assert!(g.contains(&QMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]])));
        assert!(g.elements(4).is_err());
    }

    #[test]
    fn orbit_mod_one() {
        let g = square_group();
        let (orb, stab) = g.stabilizer_with(&vec![q(1, 2), q(0, 1)], mod_one_action, 100).unwrap();
        assert_eq!(orb, vec![vec![q(1, 2), q(0, 1)], vec![q(0, 1), q(1, 2)]]);
        assert_eq!(stab.order(), BigUint::from(4u32));
        for a in stab.generators() {
            assert_eq!(mod_one_action(a, &orb[0]), orb[0]);
        }
        let (orb0, stab0) = g.stabilizer_with(&qvec(&[0, 0]), mod_one_action, 100).unwrap();
        assert_eq!(orb0.len(), 1);
        assert_eq!(stab0.order(), g.order());
    }

    #[test]
    fn mapping_witness() {
        let g = square_group();
        let w = g.find_mapping(&vec![q(1, 2), q(0, 1)], &vec![q(0, 1), q(1, 2)], mod_one_action, 100).unwrap().unwrap();
        assert_eq!(mod_one_action(&w, &vec![q(1, 2), q(0, 1)]), vec![q(0, 1), q(1, 2)]);
        let none = g.find_mapping(&vec![q(1, 2), q(0, 1)], &vec![q(1, 2), q(1, 2)], mod_one_action, 100).unwrap();
        assert!(none.is_none());
    }
}
