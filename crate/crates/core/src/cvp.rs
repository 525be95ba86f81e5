//! Exact closest- and short-vector enumeration.
//!
//! Depth-first enumeration over the LDLᵀ factorisation of the Gram form.
//! Every pruning test is an exact rational comparison, so the outputs are
//! complete by construction.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ldl_factorize_matrix, GramForm, IVector, QMatrix, QVector};
use crate::rational::Rational;

/// Default rank limit for [`relevant_vectors`], which scans `2ⁿ − 1` cosets.
pub const RELEVANT_RANK_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosestVectorResult {
    pub min_sq_dist: Rational,
    /// Sorted lexicographically.
    pub vectors: Vec<IVector>,
}

/// Precomputed enumeration data for one Gram form.
#[derive(Clone, Debug)]
pub struct Enumerator {
    n: usize,
    // perm[k] is the original coordinate enumerated at position k.
    perm: Vec<usize>,
    lower: QMatrix,
    diag: Vec<Rational>,
    gram: GramForm,
}

enum Mode<'a> {
    Closest { best: Rational, found: Vec<IVector> },
    Ball { bound: Rational, out: &'a mut Vec<(IVector, Rational)> },
    Visit { bound: Rational, visit: &'a mut dyn FnMut(&[i64], &Rational) -> ControlFlow<()> },
}

impl Enumerator {
    pub fn new(g: &GramForm) -> Self {
        let n = g.dim();
        // Positions are visited from n−1 down to 0, so the longest basis
        // vectors go last and are fixed first.
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| g.entry(a, a).cmp(g.entry(b, b)).then(a.cmp(&b)));
        let mut pm = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                pm[(i, j)] = g.entry(perm[i], perm[j]).clone();
            }
        }
        let f = ldl_factorize_matrix(&pm).expect("Gram forms are positive definite");
        Enumerator { n, perm, lower: f.lower, diag: f.diag, gram: g.clone() }
    }

    pub fn gram(&self) -> &GramForm {
        &self.gram
    }

    fn permuted(&self, t: &[Rational]) -> QVector {
        self.perm.iter().map(|&p| t[p].clone()).collect()
    }

    fn unpermuted(&self, v: &[i64]) -> IVector {
        let mut out = vec![0; self.n];
        for (k, &p) in self.perm.iter().enumerate() {
            out[p] = v[k];
        }
        out
    }

    /// All lattice points nearest to `target`.
    pub fn closest(&self, target: &[Rational]) -> ClosestVectorResult {
        assert_eq!(target.len(), self.n, "target dimension mismatch");
        if self.n == 0 {
            return ClosestVectorResult { min_sq_dist: Rational::zero(), vectors: vec![vec![]] };
        }
        let rounded: IVector = target.iter().map(Rational::round_i64).collect();
        let diff: QVector = rounded.iter().zip(target).map(|(&r, t)| Rational::from_integer(r) - t).collect();
        let best = self.gram.norm(&diff);
        let tp = self.permuted(target);
        let mut mode = Mode::Closest { best, found: Vec::new() };
        let mut v = vec![0i64; self.n];
        self.descend(self.n, &tp, &mut v, &Rational::zero(), &mut mode);
        let Mode::Closest { best, found } = mode else { unreachable!() };
        let mut vectors: Vec<IVector> = found.iter().map(|w| self.unpermuted(w)).collect();
        vectors.sort();
        vectors.dedup();
        ClosestVectorResult { min_sq_dist: best, vectors }
    }

    /// All lattice points `v` with `‖v − center‖² ≤ bound`, with their squared distances.
    pub fn ball(&self, center: &[Rational], bound: &Rational) -> Vec<(IVector, Rational)> {
        assert_eq!(center.len(), self.n, "center dimension mismatch");
        let mut out = Vec::new();
        if bound.is_negative() {
            return out;
        }
        let tp = self.permuted(center);
        let mut mode = Mode::Ball { bound: bound.clone(), out: &mut out };
        let mut v = vec![0i64; self.n];
        self.descend(self.n, &tp, &mut v, &Rational::zero(), &mut mode);
        let mut res: Vec<(IVector, Rational)> = out.into_iter().map(|(w, d)| (self.unpermuted(&w), d)).collect();
        res.sort();
        res
    }

    /// Calls `visit` on every lattice point of the ball, in no particular
    /// order, until it breaks. Returns whether the walk was cut short.
    pub fn for_each_in_ball(
        &self,
        center: &[Rational],
        bound: &Rational,
        mut visit: impl FnMut(&IVector, &Rational) -> ControlFlow<()>,
    ) -> bool {
        assert_eq!(center.len(), self.n, "center dimension mismatch");
        if bound.is_negative() {
            return false;
        }
        let tp = self.permuted(center);
        let mut wrapped = |w: &[i64], d: &Rational| visit(&self.unpermuted(w), d);
        let mut mode = Mode::Visit { bound: bound.clone(), visit: &mut wrapped };
        let mut v = vec![0i64; self.n];
        !self.descend(self.n, &tp, &mut v, &Rational::zero(), &mut mode)
    }

    /// Returns false once a visitor has asked to stop.
    fn descend(&self, level: usize, tp: &[Rational], v: &mut IVector, partial: &Rational, mode: &mut Mode) -> bool {
        if level == 0 {
            match mode {
                Mode::Closest { best, found } => {
                    if partial < best {
                        *best = partial.clone();
                        found.clear();
                    }
                    found.push(v.clone());
                }
                Mode::Ball { out, .. } => out.push((v.clone(), partial.clone())),
                Mode::Visit { visit, .. } => return visit(v, partial).is_continue(),
            }
            return true;
        }
        let j = level - 1;
        let mut c = tp[j].clone();
        for i in j + 1..self.n {
            let l = &self.lower[(i, j)];
            if !l.is_zero() {
                c -= &(l * &(Rational::from_integer(v[i]) - &tp[i]));
            }
        }
        let d = &self.diag[j];
        let x0 = c.round_i64();
        let bound_of = |mode: &Mode| match mode {
            Mode::Closest { best, .. } => best.clone(),
            Mode::Ball { bound, .. } | Mode::Visit { bound, .. } => bound.clone(),
        };
        // None: outside the slice. Some(false): the visitor stopped.
        let step = |x: i64, mode: &mut Mode, v: &mut IVector| -> Option<bool> {
            let off = Rational::from_integer(x) - &c;
            let p = partial + &(d * &(&off * &off));
            if p > bound_of(mode) {
                return None;
            }
            v[j] = x;
            Some(self.descend(j, tp, v, &p, mode))
        };
        // Walk outward on both sides of the rounded centre; each side stops
        // at the first value outside the ellipsoid slice.
        let (mut up, mut down) = (true, true);
        let mut k = 0i64;
        while up || down {
            if up {
                match step(x0 + k, mode, v) {
                    None => up = false,
                    Some(false) => return false,
                    Some(true) => {}
                }
            }
            if down {
                match step(x0 - k - 1, mode, v) {
                    None => down = false,
                    Some(false) => return false,
                    Some(true) => {}
                }
            }
            k += 1;
        }
        v[j] = 0;
        true
    }
}

pub fn closest_vectors(g: &GramForm, target: &[Rational]) -> ClosestVectorResult {
    Enumerator::new(g).closest(target)
}

/// Nonzero lattice vectors of norm at most `bound`, sorted.
pub fn vectors_up_to_norm(g: &GramForm, bound: &Rational) -> Vec<(IVector, Rational)> {
    let zero = vec![Rational::zero(); g.dim()];
    Enumerator::new(g)
        .ball(&zero, bound)
        .into_iter()
        .filter(|(v, _)| v.iter().any(|&x| x != 0))
        .collect()
}

/// Minimal norm of `rep + 2L` and all vectors attaining it.
pub fn shortest_in_coset(g: &GramForm, rep: &[i64]) -> Result<(Rational, Vec<IVector>)> {
    shortest_in_coset_with(&Enumerator::new(g), rep)
}

fn shortest_in_coset_with(e: &Enumerator, rep: &[i64]) -> Result<(Rational, Vec<IVector>)> {
    if rep.len() != e.n {
        return Err(Error::DimensionMismatch { expected: e.n, found: rep.len() });
    }
    if rep.iter().all(|x| x % 2 == 0) {
        return Err(Error::Invalid("coset representative lies in 2L".into()));
    }
    // ‖rep + 2w‖² = 4‖w + rep/2‖², so minimise over w by a CVP at −rep/2.
    let target: QVector = rep.iter().map(|&x| Rational::new(-x, 2)).collect();
    let res = e.closest(&target);
    let mut vs: Vec<IVector> =
        res.vectors.iter().map(|w| rep.iter().zip(w).map(|(r, x)| r + 2 * x).collect()).collect();
    vs.sort();
    Ok((&res.min_sq_dist * &Rational::from_integer(4), vs))
}

/// Facet vectors of the Voronoi cell: `v` with `±v` the only shortest vectors of `v + 2L`.
pub fn relevant_vectors(g: &GramForm) -> Result<Vec<IVector>> {
    relevant_vectors_with_limit(g, RELEVANT_RANK_LIMIT)
}

pub fn relevant_vectors_with_limit(g: &GramForm, limit: usize) -> Result<Vec<IVector>> {
    let n = g.dim();
    if n > limit {
        return Err(Error::RankLimit { rank: n, limit });
    }
    let e = Enumerator::new(g);
    let mut out: Vec<IVector> = (1u64..(1u64 << n))
        .into_par_iter()
        .flat_map_iter(|mask| {
            let rep: IVector = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
            let (_, vs) = shortest_in_coset_with(&e, &rep).expect("nonzero coset");
            if vs.len() == 2 {
                vs
            } else {
                Vec::new()
            }
        })
        .collect();
    out.sort();
    Ok(out)
}
