//! Dense integer matrices and vectors over arbitrary-precision integers.
//!
//! Matrices act on column vectors; lattice bases elsewhere in the crate are
//! stored as rows. The row Hermite normal form with a unimodular transform is
//! the single workhorse behind kernels, solving and lattice canonicalization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An integer column vector.
pub type IntVec = Vec<BigInt>;

pub fn ivec(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn zero_vec(n: usize) -> IntVec {
    vec![BigInt::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> IntVec {
    let mut v = zero_vec(n);
    v[i] = BigInt::one();
    v
}

pub fn vec_add(a: &[BigInt], b: &[BigInt]) -> IntVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[BigInt], b: &[BigInt]) -> IntVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[BigInt]) -> IntVec {
    a.iter().map(|x| -x).collect()
}

pub fn vec_scale(a: &[BigInt], c: &BigInt) -> IntVec {
    a.iter().map(|x| x * c).collect()
}

pub fn vec_is_zero(a: &[BigInt]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Entries as `i64`, or `None` if any entry does not fit.
pub fn vec_to_i64(a: &[BigInt]) -> Option<Vec<i64>> {
    a.iter().map(ToPrimitive::to_i64).collect()
}

/// Extended gcd with a non-negative gcd: returns `(g, x, y)` with `x*a + y*b = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(x) => Ok(JsonInt(BigInt::from(x))),
            Raw::Str(s) => s.trim().parse().map(JsonInt).map_err(serde::de::Error::custom),
        }
    }
}

pub fn to_json_vec(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

pub fn from_json_vec(v: &[JsonInt]) -> IntVec {
    v.iter().map(|x| x.0.clone()).collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &BigInt) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    /// Builds a matrix from rows; all rows must share the given width.
    pub fn from_rows(rows: Vec<IntVec>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(IntMat { rows: nrows, cols, data })
    }

    /// Convenience constructor for literals; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<IntVec> = rows.iter().map(|r| ivec(r)).collect();
        Self::from_rows(rows, cols).expect("ragged matrix literal")
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| ivec(r)).collect(), cols)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[IntVec], rows: usize) -> Result<Self> {
        Ok(Self::from_rows(cols.to_vec(), rows)?.transpose())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
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

    fn row_mut(&mut self, i: usize) -> &mut [BigInt] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[BigInt]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn col(&self, j: usize) -> IntVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<IntVec> {
        self.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.rows_iter().map(vec_to_i64).collect()
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
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
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<IntVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(self
            .rows_iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `v · self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[BigInt]) -> Result<IntVec> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: v.len() });
        }
        let mut out = zero_vec(self.cols);
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += c * a;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMat) -> Result<IntMat> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(IntMat { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &IntMat) -> Result<IntMat> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(IntMat { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &BigInt) -> IntMat {
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> IntMat {
        self.scale(&BigInt::from(-1))
    }

    fn check_same_shape(&self, other: &IntMat) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMat { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMat) -> Result<IntMat> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        Ok(IntMat { rows: self.rows, cols, data })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// `row_i += c * row_j`.
    fn add_row_multiple(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let v = self.get(j, k) * c;
            if !v.is_zero() {
                self.data[i * self.cols + k] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.row_mut(i) {
            *x = -std::mem::take(x);
        }
    }

    /// Replaces rows `(i, j)` by `(a·ri + b·rj, c·ri + d·rj)`.
    fn combine_rows(&mut self, i: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
        for k in 0..self.cols {
            let ri = self.get(i, k).clone();
            let rj = self.get(j, k).clone();
            self.data[i * self.cols + k] = a * &ri + b * &rj;
            self.data[j * self.cols + k] = c * &ri + d * &rj;
        }
    }
}

impl Serialize for IntMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<JsonInt>> = self.rows_iter().map(to_json_vec).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<JsonInt>>::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        IntMat::from_rows(rows.iter().map(|r| from_json_vec(r)).collect(), cols)
            .map_err(serde::de::Error::custom)
    }
}

/// Result of a row Hermite normal form computation: `transform · input = form`.
#[derive(Clone, Debug)]
pub struct Hnf {
    /// Canonical row HNF; nonzero rows first.
    pub form: IntMat,
    /// Unimodular transform.
    pub transform: IntMat,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Rows of the transform spanning the left kernel of the input.
    pub fn left_kernel(&self) -> Vec<IntVec> {
        (self.rank()..self.transform.nrows()).map(|i| self.transform.row(i).to_vec()).collect()
    }
}

/// Row HNF with positive pivots and entries above each pivot in `[0, pivot)`.
pub fn hnf(a: &IntMat) -> Hnf {
    hnf_impl(a, true)
}

/// Row HNF without tracking the transform.
pub fn hnf_form(a: &IntMat) -> (IntMat, Vec<usize>) {
    let h = hnf_impl(a, false);
    (h.form, h.pivots)
}

fn hnf_impl(a: &IntMat, track: bool) -> Hnf {
    let m = a.nrows();
    let n = a.ncols();
    let mut h = a.clone();
    let mut u = if track { IntMat::identity(m) } else { IntMat::zeros(0, 0) };
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if h.get(i, col).is_zero() {
                continue;
            }
            let a0 = h.get(r, col).clone();
            let b0 = h.get(i, col).clone();
            if !a0.is_zero() && b0.is_multiple_of(&a0) {
                let q = -(&b0 / &a0);
                h.add_row_multiple(i, r, &q);
                if track {
                    u.add_row_multiple(i, r, &q);
                }
                continue;
            }
            let (g, x, y) = ext_gcd(&a0, &b0);
            let c = -(&b0 / &g);
            let d = &a0 / &g;
            h.combine_rows(r, i, &x, &y, &c, &d);
            if track {
                u.combine_rows(r, i, &x, &y, &c, &d);
            }
        }
        if h.get(r, col).is_zero() {
            continue;
        }
        if h.get(r, col).is_negative() {
            h.negate_row(r);
            if track {
                u.negate_row(r);
            }
        }
        let p = h.get(r, col).clone();
        for k in 0..r {
            let q = h.get(k, col).div_floor(&p);
            if !q.is_zero() {
                let nq = -q;
                h.add_row_multiple(k, r, &nq);
                if track {
                    u.add_row_multiple(k, r, &nq);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    Hnf { form: h, transform: u, pivots }
}

/// Smith invariant factors `d1 | d2 | ... | dr` of the nonzero part.
pub fn invariant_factors(a: &IntMat) -> Vec<BigInt> {
    let mut cur = a.clone();
    loop {
        let (h, _) = hnf_form(&cur);
        let (h2, piv2) = hnf_form(&h.transpose());
        let rank = piv2.len();
        let diagonal = (0..h2.nrows()).all(|i| {
            (0..h2.ncols()).all(|j| i == j && i < rank || h2.get(i, j).is_zero())
        });
        if diagonal {
            let mut d: Vec<BigInt> = (0..rank).map(|i| h2.get(i, i).abs()).collect();
            // Normalize to a divisibility chain.
            for i in 0..d.len() {
                for j in i + 1..d.len() {
                    let g = d[i].gcd(&d[j]);
                    let l = d[i].lcm(&d[j]);
                    d[i] = g;
                    d[j] = l;
                }
            }
            return d;
        }
        cur = h2;
    }
}
