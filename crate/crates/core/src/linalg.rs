//! Exact integer linear algebra: rank, Gram determinants, maximal-minor
//! gcds, the lattice height `H(X)`, and ternary kernel search.
//!
//! Everything here works over `BigInt`; there is no floating point. The
//! height is irrational in general, so it is carried as the exact rational
//! `H(X)^2` and every comparison against a power of two is done on
//! integers.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::instance::{for_each_combination, Instance};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|v| v.to_string()).collect()).collect();
        write!(f, "IntMatrix{rows:?}")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from equal-length rows. A matrix with no rows has no
    /// columns.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_big(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(rows * cols, data.len());
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            data.extend(cols.iter().map(|&j| self.get(i, j).clone()));
        }
        IntMatrix { rows: self.rows, cols: cols.len(), data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        IntMatrix { rows: rows.len(), cols: self.cols, data }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols && self.rows != 0 && other.rows != 0 {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let cols = if self.rows == 0 { other.cols } else { self.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IntMatrix { rows: self.rows + other.rows, cols, data })
    }

    fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        if self.rows == 0 {
            return Ok(BigInt::one());
        }
        let (rank, det) = bareiss(self.to_rows());
        Ok(if rank < self.rows { BigInt::zero() } else { det })
    }
}

/// Fraction-free (Bareiss) row reduction. Returns the rank and, for a
/// full-rank square input, the signed determinant.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut negate = false;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            for j in col + 1..n {
                let v = &pivot_row[col] * &row[j] - &row[col] * &pivot_row[j];
                // Exact: every intermediate entry is a minor of the input.
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    let det = if negate { -prev } else { prev };
    (rank, det)
}

/// Rank over the rationals.
pub fn column_rank(m: &IntMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    bareiss(m.to_rows()).0
}

/// Greedy choice of linearly independent columns, scanning left to right.
/// The result has `column_rank(m)` entries.
pub fn independent_columns(m: &IntMatrix) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..m.cols {
        let mut trial = chosen.clone();
        trial.push(j);
        if column_rank(&m.select_columns(&trial)) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// `det(V^T V)` for a matrix with linearly independent columns.
pub fn gram_determinant(v: &IntMatrix) -> Result<BigInt> {
    if column_rank(v) < v.cols {
        return Err(Error::RankDeficient);
    }
    let gram = v.transpose().mul(v)?;
    gram.determinant()
}

/// Gcd of all maximal (`cols x cols`) minors of a matrix with linearly
/// independent columns.
pub fn maximal_minor_gcd(v: &IntMatrix) -> Result<BigInt> {
    let r = v.cols;
    if column_rank(v) < r {
        return Err(Error::RankDeficient);
    }
    let mut g = BigInt::zero();
    for_each_combination(v.rows, r, |rows| {
        let minor = v.select_rows(rows).determinant().expect("square by construction");
        g = g.gcd(&minor);
        g.is_one()
    });
    Ok(g)
}

/// The lattice height `H`, held as the exact rational `H^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightValue {
    pub h_squared: BigRational,
    pub floor_log2_h: i64,
}

impl HeightValue {
    pub fn from_squared(h_squared: BigRational) -> Result<Self> {
        let floor_log2_h = floor_log2_sqrt(&h_squared)?;
        Ok(HeightValue { h_squared, floor_log2_h })
    }

    /// `H < 2^k`, decided as `p < q * 4^k` for `H^2 = p/q`.
    pub fn below_pow2(&self, k: i64) -> bool {
        let p = self.h_squared.numer();
        let q = self.h_squared.denom();
        if k >= 0 {
            *p < (q << (2 * k as u64))
        } else {
            (p << (2 * k.unsigned_abs())) < *q
        }
    }

    /// `H^2` formatted as `"p/q"`.
    pub fn ratio_string(&self) -> String {
        ratio_string(&self.h_squared)
    }
}

impl Serialize for HeightValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HeightValue", 2)?;
        st.serialize_field("h_squared", &self.ratio_string())?;
        st.serialize_field("floor_log2_h", &self.floor_log2_h)?;
        st.end()
    }
}

pub fn ratio_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Height of the lattice `span(W) ∩ Z^t` for an arbitrary integer matrix
/// `W` (zero rows allowed). A rank-zero matrix has height 1.
pub fn lattice_height(w: &IntMatrix) -> Result<HeightValue> {
    let cols = independent_columns(w);
    if cols.is_empty() {
        return HeightValue::from_squared(BigRational::one());
    }
    let v = w.select_columns(&cols);
    let det = gram_determinant(&v)?;
    let g = maximal_minor_gcd(&v)?;
    HeightValue::from_squared(BigRational::new(det, &g * &g))
}

/// `H(X)` for the matrix `W(X)` with the generators as rows.
pub fn height(x: &Instance) -> Result<HeightValue> {
    if x.is_empty() {
        return Err(Error::EmptyInstance);
    }
    lattice_height(&x.row_matrix())
}

/// The unique `k` with `4^k <= q < 4^(k+1)`, i.e. `floor(log2(sqrt(q)))`.
pub fn floor_log2_sqrt(q: &BigRational) -> Result<i64> {
    if !q.is_positive() {
        return Err(Error::InvalidArgument(format!("{} is not positive", ratio_string(q))));
    }
    let p = q.numer();
    let d = q.denom();
    let mut e = p.bits() as i64 - d.bits() as i64;
    let below = if e >= 0 { *p < (d << e as u64) } else { (p << e.unsigned_abs()) < *d };
    if below {
        e -= 1;
    }
    // e = floor(log2 q)
    Ok(e.div_euclid(2))
}

/// A vector with entries in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct TernaryVector(pub Vec<i8>);

impl TernaryVector {
    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, _)| i).collect()
    }

    pub fn negated(&self) -> TernaryVector {
        TernaryVector(self.0.iter().map(|v| -v).collect())
    }
}

/// Nonzero `y ∈ {-1,0,1}^t` with `sum y_i x_i = 0`, supported inside
/// `restrict_to` when given.
///
/// The witness is canonical: its first nonzero entry is `+1`, and among
/// such vectors it is lexicographically smallest under `-1 < 0 < 1`.
pub fn ternary_kernel(x: &Instance, restrict_to: Option<&[usize]>) -> Option<TernaryVector> {
    let vecs: Vec<Vec<i128>> = x.generators().iter().map(|g| g.iter().map(|&v| i128::from(v)).collect()).collect();
    let allowed = allowed_mask(x.len(), restrict_to);
    ternary_relation(&vecs, &allowed, None).map(TernaryVector)
}

pub(crate) fn allowed_mask(t: usize, restrict_to: Option<&[usize]>) -> Vec<bool> {
    match restrict_to {
        None => vec![true; t],
        Some(idx) => {
            let mut mask = vec![false; t];
            for &i in idx {
                if i < t {
                    mask[i] = true;
                }
            }
            mask
        }
    }
}

/// Canonical ternary relation `sum y_i v_i = 0`, or `≡ 0 (mod modulus)` for
/// one-dimensional vectors when a modulus is given.
pub(crate) fn ternary_relation(vecs: &[Vec<i128>], allowed: &[bool], modulus: Option<i128>) -> Option<Vec<i8>> {
    let t = vecs.len();
    let dim = vecs.first().map_or(0, Vec::len);
    // suffix_abs[i][c] = sum_{j >= i, allowed} |v_j[c]|
    let mut suffix_abs = vec![vec![0i128; dim]; t + 1];
    for i in (0..t).rev() {
        for c in 0..dim {
            let v = if allowed[i] { vecs[i][c].abs() } else { 0 };
            suffix_abs[i][c] = suffix_abs[i + 1][c] + v;
        }
    }
    let mut search = RelationSearch { vecs, allowed, modulus, suffix_abs, dead: HashSet::new(), y: vec![0; t] };
    let mut sum = vec![0i128; dim];
    if search.dfs(0, &mut sum, false) {
        Some(search.y)
    } else {
        None
    }
}

struct RelationSearch<'a> {
    vecs: &'a [Vec<i128>],
    allowed: &'a [bool],
    modulus: Option<i128>,
    suffix_abs: Vec<Vec<i128>>,
    /// (position, partial sum) states known not to complete, once started.
    dead: HashSet<(usize, Vec<i128>)>,
    y: Vec<i8>,
}

impl RelationSearch<'_> {
    fn normalize(&self, sum: &mut [i128]) {
        if let Some(m) = self.modulus {
            for s in sum.iter_mut() {
                *s = s.rem_euclid(m);
            }
        }
    }

    fn dfs(&mut self, i: usize, sum: &mut Vec<i128>, started: bool) -> bool {
        let t = self.vecs.len();
        if i == t {
            return started && sum.iter().all(|&s| s == 0);
        }
        if started {
            if self.modulus.is_none() && sum.iter().zip(&self.suffix_abs[i]).any(|(s, r)| s.abs() > *r) {
                return false;
            }
            if self.dead.contains(&(i, sum.clone())) {
                return false;
            }
        }
        let choices: &[i8] = if !self.allowed[i] {
            &[0]
        } else if started {
            &[-1, 0, 1]
        } else {
            &[0, 1]
        };
        for &c in choices {
            self.y[i] = c;
            if c == 0 {
                if self.dfs(i + 1, sum, started) {
                    return true;
                }
            } else {
                let saved = sum.clone();
                for (s, v) in sum.iter_mut().zip(&self.vecs[i]) {
                    *s += i128::from(c) * v;
                }
                self.normalize(sum);
                let found = self.dfs(i + 1, sum, true);
                *sum = saved;
                if found {
                    return true;
                }
            }
        }
        self.y[i] = 0;
        if started {
            self.dead.insert((i, sum.clone()));
        }
        false
    }
}
