//! Permutation groups: Schreier–Sims base and strong generating sets,
//! membership, orders and orbit/stabilizer computations.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `0..degree`, acting on the left: `(a ∘ b)(i) = a(b(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || seen[x] {
                return Err(Error::Invalid(format!("not a permutation: {images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub fn from_cycle(degree: usize, cycle: &[u32]) -> Self {
        let mut p = Self::identity(degree);
        for (k, &a) in cycle.iter().enumerate() {
            p.0[a as usize] = cycle[(k + 1) % cycle.len()];
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved(&self) -> Option<u32> {
        self.0.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i as u32)
    }

    /// Image of an index set, sorted.
    pub fn apply_set(&self, set: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = set.iter().map(|&i| self.apply(i)).collect();
        out.sort_unstable();
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    // transversal[β] maps the base point to β.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base as usize] = Some(Perm::identity(degree));
        Level { base, gens: Vec::new(), orbit: vec![base], transversal }
    }

    fn rebuild_orbit(&mut self) {
        let mut k = 0;
        while k < self.orbit.len() {
            let beta = self.orbit[k];
            for g in &self.gens {
                let img = g.apply(beta);
                if self.transversal[img as usize].is_none() {
                    let u = g.compose(self.transversal[beta as usize].as_ref().unwrap());
                    self.transversal[img as usize] = Some(u);
                    self.orbit.push(img);
                }
            }
            k += 1;
        }
    }
}

/// A permutation group with a base and strong generating set.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, gens: Vec::new(), levels: Vec::new() }
    }

    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        let mut g = Self::trivial(degree);
        for p in gens {
            if p.degree() != degree {
                return Err(Error::DimensionMismatch { expected: degree, found: p.degree() });
            }
            g.add_generator(p);
        }
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The non-redundant generators supplied so far.
    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.levels.iter().try_fold(1u64, |acc, l| acc.checked_mul(l.orbit.len() as u64))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    /// Divides `p` by transversal elements; returns the residue and the level where sifting stopped.
    fn strip(&self, p: &Perm, from: usize) -> (Perm, usize) {
        let mut h = p.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.apply(level.base);
            match &level.transversal[beta as usize] {
                Some(u) => h = u.inverse().compose(&h),
                None => return (h, i),
            }
        }
        let len = self.levels.len();
        (h, len)
    }

    pub fn contains(&self, p: &Perm) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(p, 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Adds `p` to the group; returns false when it was already a member.
    pub fn add_generator(&mut self, p: Perm) -> bool {
        if self.contains(&p) {
            return false;
        }
        self.gens.push(p.clone());
        let top = self.insert_strong(p, 0);
        self.complete_from(top);
        true
    }

    // Registers `h` (which fixes the first `from` base points) as a strong
    // generator; returns the deepest level whose generating set changed.
    fn insert_strong(&mut self, h: Perm, from: usize) -> usize {
        let mut j = from;
        while j < self.levels.len() && h.apply(self.levels[j].base) == self.levels[j].base {
            j += 1;
        }
        if j == self.levels.len() {
            let b = h.first_moved().expect("identity is never inserted");
            self.levels.push(Level::new(b, self.degree));
        }
        for l in from..=j {
            self.levels[l].gens.push(h.clone());
            self.levels[l].rebuild_orbit();
        }
        j
    }

    fn complete_from(&mut self, start: usize) {
        let mut i = start as isize;
        'outer: while i >= 0 {
            let li = i as usize;
            let orbit = self.levels[li].orbit.clone();
            let ngens = self.levels[li].gens.len();
            for &beta in &orbit {
                for gi in 0..ngens {
                    let level = &self.levels[li];
                    let g = &level.gens[gi];
                    let u_beta = level.transversal[beta as usize].as_ref().unwrap();
                    let u_img = level.transversal[g.apply(beta) as usize].as_ref().unwrap();
                    let sg = u_img.inverse().compose(&g.compose(u_beta));
                    let (h, j) = self.strip(&sg, li + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        let top = self.insert_strong(h, li + 1);
                        i = top as isize;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
    }

    /// All elements, in a deterministic order. Only sensible for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &beta in &level.orbit {
                let u = level.transversal[beta as usize].as_ref().unwrap();
                for e in &out {
                    next.push(u.compose(e));
                }
            }
            out = next;
        }
        out
    }

    pub fn orbit_of_point(&self, x: u32) -> Vec<u32> {
        let gens = self.gens.clone();
        orbit(&gens, x, |p, &y| p.apply(y), usize::MAX).expect("unbounded cap").points
    }

    /// Point orbits of the whole domain, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree as u32 {
            if seen[x as usize] {
                continue;
            }
            let mut o = self.orbit_of_point(x);
            o.sort_unstable();
            for &y in &o {
                seen[y as usize] = true;
            }
            out.push(o);
        }
        out
    }

    /// Stabilizer of an arbitrary point under an action, via Schreier generators.
    pub fn stabilizer_of<T, F>(&self, x: &T, act: F, cap: usize) -> Result<(Vec<T>, PermGroup)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&Perm, &T) -> T,
    {
        let orb = orbit(&self.gens, x.clone(), &act, cap)?;
        let target = self.order() / BigUint::from(orb.points.len());
        let mut stab = PermGroup::trivial(self.degree);
        if target.is_one() {
            return Ok((orb.points, stab));
        }
        'done: for (k, y) in orb.points.iter().enumerate() {
            let uy = orb.transversal(k, &self.gens, self.degree);
            for g in &self.gens {
                let gy = act(g, y);
                let m = orb.index[&gy];
                let um = orb.transversal(m, &self.gens, self.degree);
                let sg = um.inverse().compose(&g.compose(&uy));
                if stab.add_generator(sg) && stab.order() == target {
                    break 'done;
                }
            }
        }
        debug_assert_eq!(stab.order(), target);
        Ok((orb.points, stab))
    }

    pub fn point_stabilizer(&self, x: u32) -> PermGroup {
        self.stabilizer_of(&x, |p, &y| p.apply(y), usize::MAX).expect("point orbits are bounded").1
    }

    /// Setwise stabilizer of a sorted index set.
    pub fn set_stabilizer(&self, set: &[u32], cap: usize) -> Result<(Vec<Vec<u32>>, PermGroup)> {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.stabilizer_of(&s, |p, y: &Vec<u32>| p.apply_set(y), cap)
    }

    /// Restriction to an invariant index subset, renumbered by position in `subset`.
    pub fn restrict(&self, subset: &[u32]) -> Result<PermGroup> {
        let pos: HashMap<u32, u32> = subset.iter().enumerate().map(|(k, &x)| (x, k as u32)).collect();
        let mut gens = Vec::new();
        for g in &self.gens {
            let imgs: Option<Vec<u32>> = subset.iter().map(|&x| pos.get(&g.apply(x)).copied()).collect();
            let imgs = imgs.ok_or_else(|| Error::Invalid("subset is not invariant".into()))?;
            gens.push(Perm::from_images(imgs)?);
        }
        PermGroup::new(subset.len(), gens)
    }
}

/// An orbit with a Schreier vector: `via[k] = (generator, parent index)`.
pub struct Orbit<T> {
    pub points: Vec<T>,
    pub index: HashMap<T, usize>,
    via: Vec<Option<(usize, usize)>>,
}

impl<T: Clone + Eq + Hash> Orbit<T> {
    /// Element mapping `points[0]` to `points[k]`.
    pub fn transversal(&self, k: usize, gens: &[Perm], degree: usize) -> Perm {
        let mut p = Perm::identity(degree);
        for g in self.word(k) {
            p = gens[g].compose(&p);
        }
        p
    }

    /// Generator indices, first applied first, carrying `points[0]` to `points[k]`.
    pub fn word(&self, k: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = k;
        while let Some((g, parent)) = self.via[cur] {
            word.push(g);
            cur = parent;
        }
        word.reverse();
        word
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Breadth-first orbit of `x` under the generators, failing beyond `cap` points.
pub fn orbit<G, T, F>(gens: &[G], x: T, act: F, cap: usize) -> Result<Orbit<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&G, &T) -> T,
{
    let mut points = vec![x.clone()];
    let mut index = HashMap::new();
    index.insert(x, 0);
    let mut via = vec![None];
    let mut k = 0;
    while k < points.len() {
        for (gi, g) in gens.iter().enumerate() {
            let y = act(g, &points[k]);
            if !index.contains_key(&y) {
                if points.len() >= cap {
                    return Err(Error::OrbitCap(cap));
                }
                index.insert(y.clone(), points.len());
                points.push(y);
                via.push(Some((gi, k)));
            }
        }
        k += 1;
    }
    Ok(Orbit { points, index, via })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(n: usize) -> PermGroup {
        PermGroup::new(
            n,
            vec![Perm::from_cycle(n, &[0, 1]), Perm::from_cycle(n, &(0..n as u32).collect::<Vec<_>>())],
        )
        .unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        for (n, f) in [(2usize, 2u64), (3, 6), (4, 24), (5, 120), (7, 5040)] {
            assert_eq!(sym(n).order(), BigUint::from(f));
        }
        assert_eq!(sym(5).elements().len(), 120);
    }

    #[test]
    fn cyclic_rotation_orbit() {
        let g = PermGroup::new(4, vec![Perm::from_cycle(4, &[0, 1, 2, 3])]).unwrap();
        assert_eq!(g.order(), BigUint::from(4u32));
        let (orb, stab) = g.stabilizer_of(&1u32, |p, &y| p.apply(y), 100).unwrap();
        assert_eq!(orb.len(), 4);
        assert!(stab.is_trivial());
    }

    #[test]
    fn fixed_point_has_whole_group_as_stabilizer() {
        let g = PermGroup::new(5, vec![Perm::from_cycle(5, &[1, 2, 3]), Perm::from_cycle(5, &[1, 2])]).unwrap();
        let s = g.point_stabilizer(0);
        assert_eq!(s.order(), g.order());
        assert_eq!(g.point_stabilizer(1).order(), BigUint::from(2u32));
    }

    #[test]
    fn membership() {
        let g = PermGroup::new(4, vec![Perm::from_cycle(4, &[0, 1, 2])]).unwrap();
        assert!(g.contains(&Perm::from_cycle(4, &[0, 2, 1])));
        assert!(!g.contains(&Perm::from_cycle(4, &[0, 1])));
        // Alternating group: generated by 3-cycles.
        let a5 = PermGroup::new(5, vec![Perm::from_cycle(5, &[0, 1, 2]), Perm::from_cycle(5, &[0, 1, 2, 3, 4])]).unwrap();
        assert_eq!(a5.order(), BigUint::from(60u32));
        assert!(!a5.contains(&Perm::from_cycle(5, &[0, 1])));
    }

    #[test]
    fn set_stabilizer_of_square_edge() {
        // Dihedral group of the square acting on corners 0..4 in cyclic order.
        let d4 = PermGroup::new(4, vec![Perm::from_cycle(4, &[0, 1, 2, 3]), Perm::from_images(vec![0, 3, 2, 1]).unwrap()])
            .unwrap();
        assert_eq!(d4.order(), BigUint::from(8u32));
        let (orb, stab) = d4.set_stabilizer(&[0, 1], 100).unwrap();
        assert_eq!(orb.len(), 4);
        assert_eq!(stab.order(), BigUint::from(2u32));
        let r = stab.restrict(&[0, 1]).unwrap();
        assert_eq!(r.order(), BigUint::from(2u32));
    }

    #[test]
    fn orbit_cap_is_reported() {
        assert_eq!(orbit(sym(6).generators(), 0u32, |p, &y| p.apply(y), 3).err(), Some(Error::OrbitCap(3)));
    }

    fn random_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn order_matches_closure(gens in proptest::collection::vec(random_perm(6), 1..3)) {
            let g = PermGroup::new(6, gens.clone()).unwrap();
            // Brute-force closure.
            let mut all = std::collections::HashSet::new();
            all.insert(Perm::identity(6));
            let mut frontier = vec![Perm::identity(6)];
            while let Some(p) = frontier.pop() {
                for s in &gens {
                    let q = s.compose(&p);
                    if all.insert(q.clone()) {
                        frontier.push(q);
                    }
                }
            }
            prop_assert_eq!(g.order(), BigUint::from(all.len()));
            let elems: std::collections::HashSet<Perm> = g.elements().into_iter().collect();
            prop_assert_eq!(elems, all);
        }

        #[test]
        fn orbit_stabilizer_theorem(gens in proptest::collection::vec(random_perm(6), 1..3), x in 0u32..6) {
            let g = PermGroup::new(6, gens).unwrap();
            let (orb, stab) = g.stabilizer_of(&x, |p, &y| p.apply(y), 1000).unwrap();
            prop_assert_eq!(stab.order() * BigUint::from(orb.len()), g.order());
            for s in stab.generators() {
                prop_assert_eq!(s.apply(x), x);
            }
        }
    }
}
