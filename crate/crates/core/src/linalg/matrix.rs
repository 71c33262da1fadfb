use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::scalar::{GaussianRational, Rational};
use super::LinalgError;

/// Dense matrix over Q(i), row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QiMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl QiMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianRational::one();
        }
        m
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: Vec<GaussianRational>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from row vectors. `cols` is needed only to give an
    /// empty row list a width.
    pub fn from_rows(rows: Vec<Vec<GaussianRational>>, cols: usize) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(Self { rows: n, cols, entries })
    }

    pub fn from_columns(columns: &[Vec<GaussianRational>], rows: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::Shape(format!(
                    "column {j} has {} entries, expected {rows}",
                    col.len()
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    /// Integer convenience constructor: each entry is `(re, im)`.
    pub fn from_int_pairs(rows: &[&[(i64, i64)]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&(a, b)| GaussianRational::from_ints(a, b)).collect())
            .collect();
        Self::from_rows(data, cols).expect("ragged integer matrix")
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

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<GaussianRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(GaussianRational::is_real)
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

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(GaussianRational::conj).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussianRational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(m)
    }

    /// Selects the given columns in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for (k, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend_from_slice(self.row(i));
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Kronecker product; row index `i*b.rows + k`, column `j*b.cols + l`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form together with the pivot column of each
    /// nonzero row. The pivot in each column is the first nonzero entry at or
    /// below the current row.
    /// Reduced row echelon form and its pivot columns.
    ///
    /// Runs fraction-free Gauss–Jordan elimination over the Gaussian integers:
    /// rows are first cleared of denominators, every update divides exactly by
    /// the previous pivot (so entries stay minors of the scaled matrix), and
    /// one final division by the common pivot gives the reduced form.
    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let mut m: Vec<Vec<GaussInt>> = (0..self.rows).map(|i| integer_row(self.row(i))).collect();
        let mut pivots = Vec::new();
        let mut prev = GaussInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let pivot_row = std::mem::take(&mut m[r]);
            let piv = pivot_row[c].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    let mut v = piv.mul(x);
                    if !f.is_zero() && !y.is_zero() {
                        v = v.sub(&f.mul(y));
                    }
                    *x = v.div_exact(&prev);
                }
            }
            m[r] = pivot_row;
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        let entries = m
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                let prev = &prev;
                row.iter().map(move |x| {
                    if i < r && !x.is_zero() {
                        x.div_to_rational(prev)
                    } else {
                        GaussianRational::zero()
                    }
                })
            })
            .collect();
        (
            QiMatrix {
                rows: self.rows,
                cols: self.cols,
                entries,
            },
            pivots,
        )
    }

    /// Textbook elimination over Q(i); kept as an oracle for the
    /// fraction-free version.
    #[cfg(test)]
    fn rref_rational(&self) -> (Self, Vec<usize>) {
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
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    let v = &m[(r, j)] * &inv;
                    m[(r, j)] = v;
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let delta = &factor * &m[(r, j)];
                    m[(i, j)] -= &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> Self {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Basis of the null space as column vectors, one per free column,
    /// in the standard "free variable = 1" normalization.
    pub fn null_space_vectors(&self) -> Vec<Vec<GaussianRational>> {
        let (r, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[free] = GaussianRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(row, free)];
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self) -> Result<GaussianRational, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = GaussianRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(GaussianRational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] * &inv;
                for j in c..n {
                    if m[(c, j)].is_zero() {
                        continue;
                    }
                    let delta = &factor * &m[(c, j)];
                    m[(i, j)] -= &delta;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse, or `None` when singular.
    pub fn inverse(&self) -> Result<Option<Self>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n))?;
        let (r, pivots) = aug.rref_with_pivots();
        if n > 0 && (pivots.len() < n || pivots[n - 1] != n - 1) {
            return Ok(None);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(Some(r.select_columns(&cols)))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for QiMatrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QiMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianRational {
        &mut self.entries[i * self.cols + j]
    }
}

/// Gaussian integer `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn one() -> Self {
        Self {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: self.re - &o.re,
            im: self.im - &o.im,
        }
    }

    /// `self · conj(d)` and `|d|²`.
    fn times_conj(&self, d: &GaussInt) -> (BigInt, BigInt, BigInt) {
        let norm = &d.re * &d.re + &d.im * &d.im;
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        (re, im, norm)
    }

    fn div_exact(&self, d: &GaussInt) -> GaussInt {
        if d.im.is_zero() && d.re.is_one() {
            return self.clone();
        }
        let (re, im, norm) = self.times_conj(d);
        debug_assert!((&re % &norm).is_zero() && (&im % &norm).is_zero(), "inexact Bareiss division");
        GaussInt {
            re: re / &norm,
            im: im / norm,
        }
    }

    fn div_to_rational(&self, d: &GaussInt) -> GaussianRational {
        let (re, im, norm) = self.times_conj(d);
        GaussianRational::new(Rational::new(re, norm.clone()), Rational::new(im, norm))
    }
}

/// A row scaled by the lcm of its denominators.
fn integer_row(row: &[GaussianRational]) -> Vec<GaussInt> {
    let mut den = BigInt::one();
    for e in row {
        den = den.lcm(e.re.denom()).lcm(e.im.denom());
    }
    let scaled = |r: &Rational| r.numer() * (&den / r.denom());
    row.iter()
        .map(|e| GaussInt {
            re: scaled(&e.re),
            im: scaled(&e.im),
        })
        .collect()
}

/// Products are formed fraction-free: each factor is scaled to Gaussian
/// integers over a common denominator, so only the final entries are reduced.
impl<'a> Mul<&'a QiMatrix> for &'a QiMatrix {
    type Output = QiMatrix;
    fn mul(self, rhs: &QiMatrix) -> QiMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let (a, da) = self.integer_form();
        let (b, db) = rhs.integer_form();
        let den = da * db;
        let mut re_acc = vec![BigInt::zero(); rhs.cols];
        let mut im_acc = vec![BigInt::zero(); rhs.cols];
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let (ar, ai) = &a[i * self.cols + k];
                if ar.is_zero() && ai.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let (br, bi) = &b[k * rhs.cols + j];
                    if br.is_zero() && bi.is_zero() {
                        continue;
                    }
                    re_acc[j] += ar * br - ai * bi;
                    im_acc[j] += ar * bi + ai * br;
                }
            }
            for j in 0..rhs.cols {
                let re = std::mem::take(&mut re_acc[j]);
                let im = std::mem::take(&mut im_acc[j]);
                entries.push(GaussianRational::new(
                    Rational::new(re, den.clone()),
                    Rational::new(im, den.clone()),
                ));
            }
        }
        QiMatrix {
            rows: self.rows,
            cols: rhs.cols,
            entries,
        }
    }
}

impl QiMatrix {
    /// Entries as Gaussian integers `(re, im)` over one common denominator.
    fn integer_form(&self) -> (Vec<(BigInt, BigInt)>, BigInt) {
        let mut den = BigInt::one();
        for e in &self.entries {
            den = den.lcm(e.re.denom()).lcm(e.im.denom());
        }
        let scaled = |r: &Rational| r.numer() * (&den / r.denom());
        let ints = self.entries.iter().map(|e| (scaled(&e.re), scaled(&e.im))).collect();
        (ints, den)
    }
}

impl<'a> Add<&'a QiMatrix> for &'a QiMatrix {
    type Output = QiMatrix;
    fn add(self, rhs: &QiMatrix) -> QiMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        QiMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a QiMatrix> for &'a QiMatrix {
    type Output = QiMatrix;
    fn sub(self, rhs: &QiMatrix) -> QiMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        QiMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for QiMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// Serialized as an array of row arrays.
impl Serialize for QiMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QiMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<GaussianRational>>::deserialize(deserializer)?;
        let cols = rows.first().map_or(0, Vec::len);
        QiMatrix::from_rows(rows, cols).map_err(de::Error::custom)
    }
}
