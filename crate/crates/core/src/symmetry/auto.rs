//! Automorphism groups of lattices by backtracking over basis images.

use std::collections::{HashMap, HashSet};

use crate::cvp::vectors_up_to_norm;
use crate::error::{Error, Result};
use crate::linalg::{common_denominator, lll_reduce, qvec, GramForm, IVector, QMatrix, QVector};
use crate::rational::Rational;

use super::group::MatrixGroup;
use super::perm::orbit;

pub const AUTOMORPHISM_RANK_LIMIT: usize = 12;

/// The short vectors used as the faithful domain of lattice groups.
pub fn lattice_domain(g: &GramForm) -> Vec<QVector> {
    let bound = (0..g.dim()).map(|i| g.entry(i, i).clone()).max().unwrap_or_else(Rational::zero);
    vectors_up_to_norm(g, &bound).into_iter().map(|(v, _)| qvec(&v)).collect()
}

/// Whether an integral matrix is a unimodular isometry of `g`.
pub fn preserves_gram(g: &GramForm, a: &QMatrix) -> bool {
    a.entries().iter().all(Rational::is_integer)
        && a.transpose().mul(g.matrix()).mul(a) == *g.matrix()
        && a.determinant().abs().is_one()
}

/// The smallest ball `‖v‖² ≤ b`, over `b` in a geometric ladder from the
/// minimum diagonal entry, whose vectors span the space. Any such ball is
/// invariant and carries a faithful action.
pub fn spanning_domain(g: &GramForm) -> Vec<QVector> {
    let n = g.dim();
    let mut bound = (0..n).map(|i| g.entry(i, i).clone()).min().unwrap_or_else(Rational::zero);
    loop {
        let vs: Vec<QVector> = vectors_up_to_norm(g, &bound).into_iter().map(|(v, _)| qvec(&v)).collect();
        if n == 0 || QMatrix::from_columns(&vs).rank() == n {
            return vs;
        }
        bound = &bound * &Rational::new(5, 4);
    }
}

/// Group generated by supplied isometries, acting on [`spanning_domain`].
pub fn group_from_generators(g: &GramForm, gens: &[QMatrix]) -> Result<MatrixGroup> {
    for a in gens {
        if !preserves_gram(g, a) {
            return Err(Error::Invalid("generator is not a unimodular isometry of the Gram form".into()));
        }
    }
    MatrixGroup::new(g.dim(), gens, spanning_domain(g))
}

pub fn automorphism_group(g: &GramForm) -> Result<MatrixGroup> {
    automorphism_group_with_limit(g, AUTOMORPHISM_RANK_LIMIT)
}

/// All unimodular `A` with `Aᵀ g A = g`. The search runs on an LLL-reduced
/// basis and the generators are conjugated back.
pub fn automorphism_group_with_limit(g: &GramForm, limit: usize) -> Result<MatrixGroup> {
    let n = g.dim();
    if n > limit {
        return Err(Error::RankLimit { rank: n, limit });
    }
    let u = lll_reduce(g);
    if u == QMatrix::identity(n) {
        return reduced_automorphisms(g);
    }
    let uinv = u.inverse()?;
    let reduced = reduced_automorphisms(&g.transform(&u)?)?;
    let gens: Vec<QMatrix> = reduced.generators().iter().map(|a| u.mul(a).mul(&uinv)).collect();
    MatrixGroup::new(n, &gens, spanning_domain(g))
}

/// The backtrack search, a stabilizer chain along the given basis.
fn reduced_automorphisms(g: &GramForm) -> Result<MatrixGroup> {
    let n = g.dim();
    let domain = lattice_domain(g);
    let mut group = MatrixGroup::trivial(n, domain.clone())?;
    let ints: Vec<IVector> = domain.iter().map(|v| v.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
    let search = Search::new(g, g, ints);
    let unit = |i: usize| -> IVector {
        let mut e = vec![0; n];
        e[i] = 1;
        e
    };
    for i in (0..n).rev() {
        // Current generators all fix e_0..e_{i-1}; grow the orbit of e_i.
        let prefix: Vec<usize> = (0..i).map(|j| search.index[&unit(j)]).collect();
        let mut known = orbit_set(&group, &unit(i));
        for &w in &search.cands[i] {
            if known.contains(&search.pool[w]) {
                continue;
            }
            let mut trial = prefix.clone();
            trial.push(w);
            if let Some(a) = search.complete(&trial) {
                debug_assert!(preserves_gram(g, &a));
                group.add_generator(&a)?;
                known = orbit_set(&group, &unit(i));
            }
        }
    }
    Ok(group)
}

fn orbit_set(group: &MatrixGroup, v: &IVector) -> HashSet<IVector> {
    let start = qvec(v);
    let orb = orbit(group.generators(), start, |a: &QMatrix, x: &QVector| a.mul_vec(x), usize::MAX)
        .expect("orbits of lattice vectors are finite");
    orb.points.iter().map(|x| x.iter().map(|y| y.to_i64().unwrap()).collect()).collect()
}

/// An isometry `A` from `g` onto `h`: integral with `Aᵀ h A = g` and
/// `det A = ±1`, so its columns are a basis of the second lattice.
pub fn find_isometry(g: &GramForm, h: &GramForm) -> Option<QMatrix> {
    let n = g.dim();
    if h.dim() != n || g.determinant() != h.determinant() {
        return None;
    }
    let bound = (0..n).map(|i| g.entry(i, i).clone()).max()?;
    let vecs: Vec<IVector> = vectors_up_to_norm(h, &bound).into_iter().map(|(v, _)| v).collect();
    Search::new(g, h, vecs).complete(&[])
}

/// Backtracking over images of the basis vectors with forward checking:
/// every later position keeps the candidates compatible with the prefix.
struct Search {
    n: usize,
    pool: Vec<IVector>,
    index: HashMap<IVector, usize>,
    // h·v for each pool vector, and g, both scaled to integers.
    hv: Vec<Vec<i128>>,
    gs: Vec<Vec<i128>>,
    cands: Vec<Vec<usize>>,
}

impl Search {
    fn new(g: &GramForm, h: &GramForm, pool: Vec<IVector>) -> Self {
        let n = g.dim();
        let mut all: Vec<Rational> = g.matrix().entries().to_vec();
        all.extend_from_slice(h.matrix().entries());
        let d = Rational::from_bigint(common_denominator(&all));
        let scaled = |x: &Rational| -> i128 { (x * &d).to_i64().expect("scaled Gram entries fit in i64") as i128 };
        let gs: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| scaled(g.entry(i, j))).collect()).collect();
        let hs: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| scaled(h.entry(i, j))).collect()).collect();
        let hv: Vec<Vec<i128>> =
            pool.iter().map(|v| hs.iter().map(|row| row.iter().zip(v).map(|(a, &b)| a * b as i128).sum()).collect()).collect();
        let norm = |k: usize| -> i128 { pool[k].iter().zip(&hv[k]).map(|(&a, b)| a as i128 * b).sum() };
        let cands = (0..n).map(|i| (0..pool.len()).filter(|&k| norm(k) == gs[i][i]).collect()).collect();
        let index = pool.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect();
        Search { n, pool, index, hv, gs, cands }
    }

    fn inner(&self, a: usize, b: usize) -> i128 {
        self.pool[a].iter().zip(&self.hv[b]).map(|(&x, y)| x as i128 * y).sum()
    }

    fn complete(&self, prefix: &[usize]) -> Option<QMatrix> {
        let k = prefix.len();
        for (j, &u) in prefix.iter().enumerate() {
            if prefix[..j].iter().enumerate().any(|(i, &w)| self.inner(w, u) != self.gs[i][j]) {
                return None;
            }
        }
        let lists: Vec<Vec<usize>> = (k..self.n)
            .map(|l| {
                self.cands[l]
                    .iter()
                    .copied()
                    .filter(|&x| prefix.iter().enumerate().all(|(i, &u)| self.inner(u, x) == self.gs[i][l]))
                    .collect()
            })
            .collect();
        if lists.iter().any(Vec::is_empty) {
            return None;
        }
        let mut images = prefix.to_vec();
        self.extend(&mut images, &lists).map(|ims| {
            QMatrix::from_columns(&ims.iter().map(|&i| qvec(&self.pool[i])).collect::<Vec<_>>())
        })
    }

    fn extend(&self, images: &mut Vec<usize>, lists: &[Vec<usize>]) -> Option<Vec<usize>> {
        let k = images.len();
        let Some((first, rest)) = lists.split_first() else {
            return Some(images.clone());
        };
        'next: for &w in first {
            let mut narrowed = Vec::with_capacity(rest.len());
            for (off, list) in rest.iter().enumerate() {
                let l = k + 1 + off;
                let kept: Vec<usize> = list.iter().copied().filter(|&x| self.inner(w, x) == self.gs[k][l]).collect();
                if kept.is_empty() {
                    continue 'next;
                }
                narrowed.push(kept);
            }
            images.push(w);
            if let Some(found) = self.extend(images, &narrowed) {
                return Some(found);
            }
            images.pop();
        }
        None
    }
}

/// Parses generator matrices: blocks of `n` rows of `n` integers separated by
/// blank lines; `#` starts a comment.
pub fn parse_group_file(text: &str, n: usize) -> Result<Vec<QMatrix>> {
    let mut mats = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let flush = |rows: &mut Vec<Vec<i64>>, mats: &mut Vec<QMatrix>| -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        if rows.len() != n {
            return Err(Error::Parse(format!("generator block has {} rows, expected {n}", rows.len())));
        }
        mats.push(QMatrix::from_i64_rows(rows));
        rows.clear();
        Ok(())
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            flush(&mut rows, &mut mats)?;
            continue;
        }
        let row: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("line {}: bad integer {t:?}", lineno + 1))))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!("line {}: {} entries, expected {n}", lineno + 1, row.len())));
        }
        rows.push(row);
        if rows.len() == n {
            flush(&mut rows, &mut mats)?;
        }
    }
    flush(&mut rows, &mut mats)?;
    Ok(mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn brute_force_order(g: &GramForm) -> usize {
        let n = g.dim();
        let mut count = 0;
        let total = 3usize.pow((n * n) as u32);
        for code in 0..total {
            let mut c = code;
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let d = (c % 3) as i64 - 1;
                            c /= 3;
                            d
                        })
                        .collect()
                })
                .collect();
            let a = QMatrix::from_i64_rows(&rows);
            if a.transpose().mul(g.matrix()).mul(&a) == *g.matrix() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn small_lattice_orders() {
        let z2 = GramForm::identity(2);
        let a2 = GramForm::from_i64_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let z3 = GramForm::identity(3);
        let a3 = GramForm::from_i64_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        for (g, order) in [(&z2, 8u32), (&a2, 12), (&z3, 48), (&a3, 48)] {
            let grp = automorphism_group(g).unwrap();
            assert_eq!(grp.order(), BigUint::from(order));
            assert_eq!(brute_force_order(g), order as usize);
            for a in grp.generators() {
                assert!(preserves_gram(g, a));
            }
        }
    }

    #[test]
    fn d4_and_z5() {
        let d4 = GramForm::from_i64_rows(&[
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, -1],
            vec![0, -1, 2, 0],
            vec![0, -1, 0, 2],
        ])
        .unwrap();
        assert_eq!(automorphism_group(&d4).unwrap().order(), BigUint::from(1152u32));
        assert_eq!(automorphism_group(&GramForm::identity(5)).unwrap().order(), BigUint::from(3840u32));
    }

    #[test]
    fn isometry_search() {
        let a2 = GramForm::from_i64_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let a2b = GramForm::from_i64_rows(&[vec![2, -1], vec![-1, 2]]).unwrap();
        let a = find_isometry(&a2, &a2b).unwrap();
        assert_eq!(a.transpose().mul(a2b.matrix()).mul(&a), *a2.matrix());
        assert!(find_isometry(&a2, &GramForm::identity(2)).is_none());
        // Same determinant, different lattices.
        let z2x = GramForm::from_i64_rows(&[vec![1, 0], vec![0, 4]]).unwrap();
        let z2y = GramForm::from_i64_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert!(find_isometry(&z2x, &z2y).is_none());
    }

    #[test]
    fn rank_limit() {
        assert!(matches!(
            automorphism_group_with_limit(&GramForm::identity(3), 2),
            Err(Error::RankLimit { rank: 3, limit: 2 })
        ));
    }

    #[test]
    fn group_file() {
        let mats = parse_group_file("# swap\n0 1\n1 0\n\n-1 0\n0 1\n", 2).unwrap();
        assert_eq!(mats.len(), 2);
        let grp = group_from_generators(&GramForm::identity(2), &mats).unwrap();
        assert_eq!(grp.order(), BigUint::from(8u32));
        assert!(parse_group_file("1 2 3\n", 2).is_err());
        assert!(group_from_generators(&GramForm::identity(2), &[QMatrix::from_i64_rows(&[vec![2, 0], vec![0, 1]])]).is_err());
    }
}
