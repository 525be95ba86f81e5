//! Exact vectors, matrices and Gram forms.
//!
//! Lattice vectors are integer tuples in the coordinates of a fixed basis;
//! the geometry lives entirely in the [`GramForm`].

use std::fmt;
use std::ops::{Index, IndexMut};

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type QVector = Vec<Rational>;
/// An integral vector, typically a lattice point in lattice coordinates.
pub type IVector = Vec<i64>;

pub fn qvec(v: &[i64]) -> QVector {
    v.iter().map(|&x| Rational::from_integer(x)).collect()
}

pub fn to_ivec(v: &[Rational]) -> Option<IVector> {
    v.iter().map(|x| x.to_i64()).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vadd(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(a: &[Rational], s: &Rational) -> QVector {
    a.iter().map(|x| x * s).collect()
}

/// Componentwise reduction modulo 1 into `[0, 1)`.
pub fn vfract(a: &[Rational]) -> QVector {
    a.iter().map(Rational::fract).collect()
}

/// Vertex barycenter of a non-empty point set.
pub fn barycenter(points: &[QVector]) -> QVector {
    let n = points[0].len();
    let inv = Rational::new(1, points.len() as i64);
    (0..n)
        .map(|j| points.iter().map(|p| &p[j]).sum::<Rational>() * &inv)
        .collect()
}

pub fn ibarycenter(points: &[IVector]) -> QVector {
    let n = points[0].len();
    (0..n)
        .map(|j| Rational::new(points.iter().map(|p| p[j]).sum(), points.len() as i64))
        .collect()
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Rational]) -> num_bigint::BigInt {
    v.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(&x.denom()))
}

/// Scales by a positive factor so entries are coprime integers.
pub fn primitive_integer(v: &[Rational]) -> QVector {
    let den = common_denominator(v);
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(num_bigint::BigInt::from(0), |acc, x| acc.gcd(x));
    if g == num_bigint::BigInt::from(0) {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_bigint(x / &g)).collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| qvec(r)).collect())
    }

    pub fn from_columns(cols: &[QVector]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..r {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<QVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<IVector>> {
        (0..self.rows).map(|i| to_ivec(self.row(i))).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> QVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| &self[(i, i)]).sum()
    }

    /// Fraction-free (Bareiss) determinant after clearing row denominators.
    pub fn determinant(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rational::one();
        }
        let mut scale = Rational::one();
        let mut a: Vec<Vec<Rational>> = Vec::with_capacity(n);
        for i in 0..n {
            let den = Rational::from_bigint(common_denominator(self.row(i)));
            scale = &scale * &den;
            a.push(self.row(i).iter().map(|x| x * &den).collect());
        }
        let mut prev = Rational::one();
        let mut negate = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                a.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = &v / &prev;
                }
                a[i][k] = Rational::zero();
            }
            prev = a[k][k].clone();
        }
        let det = &a[n - 1][n - 1] / &scale;
        if negate {
            -det
        } else {
            det
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    pub fn solve(&self, b: &[Rational]) -> Result<QVector> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok((0..n).map(|i| r[(i, n)].clone()).collect())
    }

    /// Any solution of a consistent (possibly non-square) system, or `None`.
    pub fn solve_any(&self, b: &[Rational]) -> Option<QVector> {
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<QVector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(i, f)];
                }
                v
            })
            .collect()
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl serde::Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for QMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(d)?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(QMatrix::from_rows(rows))
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
pub fn independent_subset(vectors: &[QVector]) -> Vec<usize> {
    let Some(dim) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut chosen = Vec::new();
    // Echelonised copies of the chosen vectors with their pivot columns.
    let mut basis: Vec<(usize, QVector)> = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (p, b) in &basis {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for j in 0..dim {
                    if !b[j].is_zero() {
                        w[j] = &w[j] - &(&f * &b[j]);
                    }
                }
            }
        }
        if let Some(p) = (0..dim).find(|&j| !w[j].is_zero()) {
            let inv = w[p].recip();
            let w: QVector = w.iter().map(|x| x * &inv).collect();
            basis.push((p, w));
            chosen.push(idx);
            if chosen.len() == dim {
                break;
            }
        }
    }
    chosen
}

/// Unit lower-triangular `lower` and positive `diag` with `lower · diag · lowerᵀ = g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdlFactorization {
    pub lower: QMatrix,
    pub diag: Vec<Rational>,
}

impl LdlFactorization {
    pub fn reconstruct(&self) -> QMatrix {
        self.lower.mul(&QMatrix::diagonal(&self.diag)).mul(&self.lower.transpose())
    }
}

/// LDLᵀ factorisation of a symmetric matrix; fails on the first non-positive pivot.
pub fn ldl_factorize_matrix(g: &QMatrix) -> Result<LdlFactorization> {
    if let Some((row, col)) = g.first_asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    let n = g.rows();
    let mut lower = QMatrix::identity(n);
    let mut diag: Vec<Rational> = Vec::with_capacity(n);
    let mut minor = Rational::one();
    for j in 0..n {
        let mut d = g[(j, j)].clone();
        for k in 0..j {
            let l = &lower[(j, k)];
            if !l.is_zero() {
                d -= &(&(l * l) * &diag[k]);
            }
        }
        minor = &minor * &d;
        if !d.is_positive() {
            return Err(Error::NotPositiveDefinite { order: j + 1, value: minor });
        }
        for i in j + 1..n {
            let mut s = g[(i, j)].clone();
            for k in 0..j {
                let (a, b) = (&lower[(i, k)], &lower[(j, k)]);
                if !a.is_zero() && !b.is_zero() {
                    s -= &(&(a * b) * &diag[k]);
                }
            }
            lower[(i, j)] = &s / &d;
        }
        diag.push(d);
    }
    Ok(LdlFactorization { lower, diag })
}

pub fn ldl_factorize(g: &GramForm) -> LdlFactorization {
    ldl_factorize_matrix(g.matrix()).expect("Gram forms are positive definite")
}

/// A symmetric positive-definite rational matrix: the metric of a lattice in
/// lattice coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct GramForm {
    matrix: QMatrix,
    // Integer entries `den · g` when small enough for the i128 fast path.
    scaled: Option<(i128, Vec<i128>)>,
}

impl GramForm {
    pub fn new(matrix: QMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        ldl_factorize_matrix(&matrix)?;
        let scaled = Self::integer_scaling(&matrix);
        Ok(GramForm { matrix, scaled })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(QMatrix::from_i64_rows(rows))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(QMatrix::identity(n)).expect("identity is positive definite")
    }

    fn integer_scaling(m: &QMatrix) -> Option<(i128, Vec<i128>)> {
        let den = common_denominator(m.entries()).to_i128()?;
        let limit = 1i128 << 40;
        let ints: Option<Vec<i128>> = m
            .entries()
            .iter()
            .map(|x| {
                let v = (x.numer() * (num_bigint::BigInt::from(den) / x.denom())).to_i128()?;
                (v.abs() < limit).then_some(v)
            })
            .collect();
        Some((den, ints?))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[(i, j)]
    }

    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Result<Rational> {
        let n = self.dim();
        for len in [u.len(), v.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        Ok(self.inner_unchecked(u, v))
    }

    pub fn inner_unchecked(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let gv = self.matrix.mul_vec(v);
        dot(u, &gv)
    }

    pub fn norm(&self, v: &[Rational]) -> Rational {
        self.inner_unchecked(v, v)
    }

    /// `uᵀ g v` for integral vectors.
    pub fn inner_int(&self, u: &[i64], v: &[i64]) -> Rational {
        if let Some((den, ints)) = &self.scaled {
            if let Some(s) = Self::int_form(ints, self.dim(), u, v) {
                return Rational::from_i128(s, *den);
            }
        }
        self.inner_unchecked(&qvec(u), &qvec(v))
    }

    pub fn norm_int(&self, v: &[i64]) -> Rational {
        self.inner_int(v, v)
    }

    fn int_form(ints: &[i128], n: usize, u: &[i64], v: &[i64]) -> Option<i128> {
        let mut total: i128 = 0;
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for j in 0..n {
                if v[j] != 0 {
                    row = row.checked_add(ints[i * n + j].checked_mul(v[j] as i128)?)?;
                }
            }
            total = total.checked_add(row.checked_mul(u[i] as i128)?)?;
        }
        Some(total)
    }

    /// The coordinate functional `x ↦ vᵀ g x`, i.e. `g v`.
    pub fn functional_int(&self, v: &[i64]) -> QVector {
        self.matrix.mul_vec(&qvec(v))
    }

    pub fn determinant(&self) -> Rational {
        self.matrix.determinant()
    }

    pub fn scaled_by(&self, c: &Rational) -> Result<GramForm> {
        GramForm::new(self.matrix.scale(c))
    }

    /// `Aᵀ g A` for a square change of basis `A`.
    pub fn transform(&self, a: &QMatrix) -> Result<GramForm> {
        GramForm::new(a.transpose().mul(&self.matrix).mul(a))
    }

    /// Parses the text format: a line with `n`, then `n` rows of `n` rationals.
    pub fn parse(text: &str) -> Result<GramForm> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty Gram file".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("expected dimension on the first line, found {header:?}")))?;
        if n == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {i}")))?;
            let row: Vec<Rational> = line
                .split_whitespace()
                .map(|tok| tok.parse::<Rational>().map_err(|e| Error::Parse(format!("row {}: {e}", i + 1))))
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(Error::Parse(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            rows.push(row);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected trailing content {extra:?}")));
        }
        GramForm::new(QMatrix::from_rows(rows))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.dim());
        for i in 0..self.dim() {
            let row: Vec<String> = self.matrix.row(i).iter().map(ToString::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for GramForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GramForm({:?})", self.matrix)
    }
}

/// Gram matrix of the dual lattice in the dual basis: `g⁻¹`.
pub fn dual_gram(g: &GramForm) -> GramForm {
    let inv = g.matrix().inverse().expect("positive definite forms are invertible");
    GramForm::new(inv).expect("inverse of a positive definite form is positive definite")
}

/// An LLL-reduced basis (δ = 3/4) of the lattice with Gram form `g`, as a
/// unimodular matrix whose columns are the new basis in old coordinates.
pub fn lll_reduce(g: &GramForm) -> QMatrix {
    let n = g.dim();
    let mut u = QMatrix::identity(n);
    let mut gm = g.matrix().clone();
    let delta = Rational::new(3, 4);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&gm);
            if mu[k][j].abs() <= Rational::new(1, 2) {
                continue;
            }
            let r = mu[k][j].round_i64();
            {
                let mut t = QMatrix::identity(n);
                t[(j, k)] = Rational::from_integer(-r);
                u = u.mul(&t);
                gm = t.transpose().mul(&gm).mul(&t);
            }
        }
        let (mu, b) = gram_schmidt(&gm);
        let m = &mu[k][k - 1];
        if b[k] >= &(&delta - &(m * m)) * &b[k - 1] {
            k += 1;
        } else {
            let mut t = QMatrix::identity(n);
            t[(k, k)] = Rational::zero();
            t[(k - 1, k - 1)] = Rational::zero();
            t[(k, k - 1)] = Rational::one();
            t[(k - 1, k)] = Rational::one();
            u = u.mul(&t);
            gm = t.transpose().mul(&gm).mul(&t);
            k = (k - 1).max(1);
        }
    }
    u
}

/// Gram–Schmidt coefficients `μ` and squared lengths `B` from a Gram matrix.
fn gram_schmidt(gm: &QMatrix) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = gm.rows();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut x = gm[(i, j)].clone();
            for l in 0..j {
                x -= &(&(&mu[j][l] * &mu[i][l]) * &b[l]);
            }
            mu[i][j] = &x / &b[j];
        }
        let mut x = gm[(i, i)].clone();
        for l in 0..i {
            x -= &(&(&mu[i][l] * &mu[i][l]) * &b[l]);
        }
        b[i] = x;
    }
    (mu, b)
}
