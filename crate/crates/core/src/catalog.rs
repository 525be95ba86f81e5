//! Named lattice families.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{common_denominator, dot, dual_gram, GramForm, QMatrix, QVector};
use crate::rational::Rational;
use crate::symmetry::{automorphism_group, group_from_generators, MatrixGroup};

#[derive(Clone, Debug)]
pub struct NamedLattice {
    pub name: String,
    pub gram: GramForm,
    /// Generators of a symmetry group known in advance, in lattice coordinates.
    pub known_group: Option<Vec<QMatrix>>,
}

impl NamedLattice {
    /// The known group if shipped, otherwise the full automorphism group.
    pub fn group(&self) -> Result<MatrixGroup> {
        match &self.known_group {
            Some(gens) => group_from_generators(&self.gram, gens),
            None => automorphism_group(&self.gram),
        }
    }

    pub fn dual(&self) -> NamedLattice {
        // Aᵀ g A = g implies A⁻ᵀ g⁻¹ A⁻¹ = g⁻¹.
        let known_group = self
            .known_group
            .as_ref()
            .map(|gens| gens.iter().map(|a| a.inverse().expect("unimodular").transpose()).collect());
        NamedLattice { name: format!("dual-{}", self.name), gram: dual_gram(&self.gram), known_group }
    }
}

/// Row-style Hermite normal form of the lattice spanned by rational vectors.
pub fn lattice_basis(gens: &[QVector]) -> Vec<QVector> {
    let Some(first) = gens.first() else { return Vec::new() };
    let m = first.len();
    let all: Vec<Rational> = gens.iter().flatten().cloned().collect();
    let d = common_denominator(&all);
    let dq = Rational::from_bigint(d.clone());
    let mut rows: Vec<Vec<BigInt>> =
        gens.iter().map(|v| v.iter().map(|x| (x * &dq).numer()).collect()).collect();
    let mut r = 0;
    for col in 0..m {
        loop {
            let piv = (r..rows.len()).filter(|&i| !rows[i][col].is_zero()).min_by_key(|&i| rows[i][col].abs());
            let Some(p) = piv else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let qt = rows[i][col].div_floor(&rows[r][col]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &qt * y;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let qt = rows[i][col].div_floor(&rows[r][col]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &qt * y;
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows.into_iter()
        .map(|row| row.into_iter().map(|x| Rational::from_big(num_rational::BigRational::new(x, d.clone()))).collect())
        .collect()
}

pub fn gram_of(basis: &[QVector]) -> Result<GramForm> {
    let n = basis.len();
    let rows: Vec<QVector> = (0..n).map(|i| (0..n).map(|j| dot(&basis[i], &basis[j])).collect()).collect();
    GramForm::new(QMatrix::from_rows(rows))
}

/// Matrices in lattice coordinates of ambient maps preserving the lattice.
fn induced(basis: &[QVector], maps: &[QMatrix]) -> Result<Vec<QMatrix>> {
    let b = QMatrix::from_columns(basis);
    let bt = b.transpose();
    let left = bt.mul(&b).inverse()?.mul(&bt);
    maps.iter()
        .map(|p| {
            let x = left.mul(&p.mul(&b));
            if b.mul(&x) != p.mul(&b) || !x.entries().iter().all(Rational::is_integer) {
                return Err(Error::Invalid("map does not preserve the lattice".into()));
            }
            Ok(x)
        })
        .collect()
}

fn unit(m: usize, i: usize) -> QVector {
    let mut e = vec![Rational::zero(); m];
    e[i] = Rational::one();
    e
}

fn int_vec(v: &[i64]) -> QVector {
    v.iter().map(|&x| Rational::from_integer(x)).collect()
}

fn from_gens(name: String, gens: &[QVector]) -> Result<NamedLattice> {
    let basis = lattice_basis(gens);
    Ok(NamedLattice { name, gram: gram_of(&basis)?, known_group: None })
}

pub fn zn(n: usize) -> Result<NamedLattice> {
    check(n >= 1, "Zn needs n ≥ 1")?;
    Ok(NamedLattice { name: format!("Z{n}"), gram: GramForm::identity(n), known_group: None })
}

fn check(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(msg.into()))
    }
}

fn root_an(n: usize) -> Vec<QVector> {
    (0..n).map(|i| {
        let mut v = unit(n + 1, i);
        v[i + 1] = -Rational::one();
        v
    })
    .collect()
}

pub fn an(n: usize) -> Result<NamedLattice> {
    anr(n, 1).map(|mut l| {
        l.name = format!("A{n}");
        l
    })
}

/// The Coxeter lattice `Aₙ ∪ (s·v + Aₙ) ∪ …` with glue `s = (n+1)/r` times
/// `v = (1/(n+1))·Σᵢ₌₂ⁿ⁺¹(eᵢ − e₁)`; `Aₙ¹ = Aₙ` and `Aₙⁿ⁺¹ = Aₙ*`.
pub fn anr(n: usize, r: usize) -> Result<NamedLattice> {
    check(n >= 1, "An needs n ≥ 1")?;
    check(r >= 1 && (n + 1) % r == 0, "Anr needs r dividing n+1")?;
    let m = n + 1;
    let s = (m / r) as i64;
    let mut gens = root_an(n);
    let mut glue = vec![Rational::new(s, m as i64); m];
    glue[0] = Rational::new(-s * n as i64, m as i64);
    gens.push(glue);
    let basis = lattice_basis(&gens);
    // Sym(n+1) by a transposition and an (n+1)-cycle, and −1.
    let swap = QMatrix::from_columns(&(0..m).map(|i| unit(m, [1, 0].get(i).copied().unwrap_or(i))).collect::<Vec<_>>());
    let cycle = QMatrix::from_columns(&(0..m).map(|i| unit(m, (i + 1) % m)).collect::<Vec<_>>());
    let neg = QMatrix::identity(m).scale(&-Rational::one());
    let maps = if m == 2 { vec![swap, neg] } else { vec![swap, cycle, neg] };
    let known = induced(&basis, &maps)?;
    Ok(NamedLattice { name: format!("A{n}^{r}"), gram: gram_of(&basis)?, known_group: Some(known) })
}

fn dn_gens(n: usize) -> Vec<QVector> {
    let mut gens: Vec<QVector> = (0..n - 1)
        .map(|i| {
            let mut v = unit(n, i);
            v[i + 1] = -Rational::one();
            v
        })
        .collect();
    let mut v = unit(n, 0);
    v[1] = Rational::one();
    gens.push(v);
    gens
}

pub fn dn(n: usize) -> Result<NamedLattice> {
    check(n >= 2, "Dn needs n ≥ 2")?;
    from_gens(format!("D{n}"), &dn_gens(n))
}

pub fn dn_plus(n: usize) -> Result<NamedLattice> {
    check(n >= 2 && n % 2 == 0, "Dnplus needs even n ≥ 2")?;
    let mut gens = dn_gens(n);
    gens.push(vec![Rational::new(1, 2); n]);
    from_gens(format!("D{n}+"), &gens)
}

pub fn e8() -> Result<NamedLattice> {
    dn_plus(8).map(|mut l| {
        l.name = "E8".into();
        l
    })
}

/// The lattice generated by the cut vectors `δ(S) ∈ {0,1}^{n(n−1)/2}`.
pub fn cut(n: usize) -> Result<NamedLattice> {
    check((3..=8).contains(&n), "CUTn needs 3 ≤ n ≤ 8")?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let gens: Vec<QVector> = (1..1u32 << (n - 1))
        .map(|mask| {
            let side = |v: usize| v > 0 && mask >> (v - 1) & 1 == 1;
            int_vec(&pairs.iter().map(|&(i, j)| i64::from(side(i) != side(j))).collect::<Vec<_>>())
        })
        .collect();
    from_gens(format!("CUT{n}"), &gens)
}

/// The densest lamination over `√2·E₈`: one extra layer at squared height 2
/// over the deep hole `e₁`, minimal norm 4.
pub fn lambda9() -> Result<NamedLattice> {
    let e8 = lattice_basis(&{
        let mut g = dn_gens(8);
        g.push(vec![Rational::new(1, 2); 8]);
        g
    });
    let two = Rational::from_integer(2);
    let hole = unit(8, 0);
    let mut rows: Vec<QVector> = e8
        .iter()
        .map(|b| {
            let mut r: QVector = e8.iter().map(|c| &two * &dot(b, c)).collect();
            r.push(&two * &dot(b, &hole));
            r
        })
        .collect();
    let mut last: QVector = e8.iter().map(|b| &two * &dot(b, &hole)).collect();
    last.push(Rational::from_integer(4));
    rows.push(last);
    Ok(NamedLattice { name: "Lambda9".into(), gram: GramForm::new(QMatrix::from_rows(rows))?, known_group: None })
}

/// Resolves a catalog name such as `Zn`, `A2`, `Anr`, `D4`, `Dnplus`,
/// `CUT3`, `E8`, `Lambda9`, or any of them prefixed with `dual-`.
pub fn make(name: &str, dim: Option<usize>, param: Option<usize>) -> Result<NamedLattice> {
    if let Some(rest) = name.strip_prefix("dual-") {
        return make(rest, dim, param).map(|l| l.dual());
    }
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (base, digits) = name.split_at(split);
    let inline: Option<usize> = if digits.is_empty() {
        None
    } else {
        Some(digits.parse().map_err(|_| Error::Parse(format!("bad lattice name {name:?}")))?)
    };
    let n = || inline.or(dim).ok_or_else(|| Error::Invalid(format!("lattice {name} needs a dimension")));
    let r = || param.ok_or_else(|| Error::Invalid(format!("lattice {name} needs --param")));
    match base {
        "Z" | "Zn" => zn(n()?),
        "A" | "An" => an(n()?),
        "Anr" | "Ar" => anr(n()?, r()?),
        "D" | "Dn" => dn(n()?),
        "Dnplus" | "Dplus" => dn_plus(n()?),
        "CUT" | "CUTn" => cut(n()?),
        "E" if inline == Some(8) => e8(),
        "Lambda" if inline == Some(9) => lambda9(),
        _ => Err(Error::Invalid(format!("unknown lattice {name:?}"))),
    }
}
