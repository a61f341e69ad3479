//! Finite-rank subgroups of `Z^n` in canonical row Hermite normal form.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{hnf, hnf_form, invariant_factors, vec_is_zero, IntMat, IntVec};

/// A subgroup of `Z^n` stored by its canonical HNF basis (rows).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient: usize,
    basis: IntMat,
    pivots: Vec<usize>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(n={}, {:?})", self.ambient, self.basis)
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    ambient: usize,
    basis: IntMat,
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeRepr { ambient: self.ambient, basis: self.basis.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = LatticeRepr::deserialize(d)?;
        Lattice::from_generators(&r.basis.to_rows(), r.ambient).map_err(serde::de::Error::custom)
    }
}

/// Index of a sublattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl Index {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Index::Finite(k) => Some(k),
            Index::Infinite => None,
        }
    }
}

/// Invariant factors `d1 | d2 | ... | dr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFactors(pub Vec<BigInt>);

pub fn snf(m: &IntMat) -> InvariantFactors {
    InvariantFactors(invariant_factors(m))
}

/// Canonical basis of the subgroup generated by `gens`.
pub fn hnf_basis(gens: &[IntVec], ambient: usize) -> Result<Lattice> {
    Lattice::from_generators(gens, ambient)
}

impl Lattice {
    pub fn zero(n: usize) -> Self {
        Lattice { ambient: n, basis: IntMat::zeros(0, n), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Lattice { ambient: n, basis: IntMat::identity(n), pivots: (0..n).collect() }
    }

    /// `c·Z^n` for `c > 0`.
    pub fn scaled_full(n: usize, c: &BigInt) -> Self {
        assert!(c.is_positive());
        Lattice { ambient: n, basis: IntMat::scalar(n, c), pivots: (0..n).collect() }
    }

    pub fn from_generators(gens: &[IntVec], ambient: usize) -> Result<Self> {
        let m = IntMat::from_rows(gens.to_vec(), ambient)?;
        Ok(Self::from_matrix_rows(&m))
    }

    /// Lattice spanned by the rows of `m`.
    pub fn from_matrix_rows(m: &IntMat) -> Self {
        let (h, pivots) = hnf_form(m);
        let r = pivots.len();
        let rows: Vec<IntVec> = (0..r).map(|i| h.row(i).to_vec()).collect();
        let basis = IntMat::from_rows(rows, m.ncols()).expect("rows share width");
        Lattice { ambient: m.ncols(), basis, pivots }
    }

    /// Lattice spanned by the columns of `a`.
    pub fn image(a: &IntMat) -> Self {
        Self::from_matrix_rows(&a.transpose())
    }

    /// `{x : a·x = 0}`.
    pub fn kernel(a: &IntMat) -> Self {
        let h = hnf(&a.transpose());
        let ker = h.left_kernel();
        Self::from_generators(&ker, a.ncols()).expect("kernel rows have domain width")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<IntVec> {
        self.basis.to_rows()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Product of the pivots; equals `[Z^n : L]` for full-rank `L`.
    pub fn pivot_product(&self) -> BigInt {
        self.pivots.iter().enumerate().map(|(i, &p)| self.basis.get(i, p).clone()).product()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: n });
        }
        Ok(())
    }

    /// Coordinates of `v` in the basis, or `None` when `v ∉ L`.
    pub fn coords(&self, v: &[BigInt]) -> Result<Option<IntVec>> {
        self.check_dim(v.len())?;
        Ok(echelon_coords(&self.basis, &self.pivots, v))
    }

    pub fn member(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coords(v)?.is_some())
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Lattice) -> Result<bool> {
        self.check_dim(other.ambient)?;
        for r in other.basis.rows_iter() {
            if !self.member(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other.ambient)?;
        Ok(Self::from_matrix_rows(&self.basis.vstack(&other.basis)?))
    }

    /// `self + span(vectors)`.
    pub fn extend(&self, vectors: &[IntVec]) -> Result<Lattice> {
        let extra = IntMat::from_rows(vectors.to_vec(), self.ambient)?;
        Ok(Self::from_matrix_rows(&self.basis.vstack(&extra)?))
    }

    /// Intersection via the left kernel of the stacked bases.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other.ambient)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Lattice::zero(self.ambient));
        }
        let stacked = self.basis.vstack(&other.basis)?;
        let h = hnf(&stacked);
        let r1 = self.rank();
        let gens: Vec<IntVec> = h
            .left_kernel()
            .iter()
            .map(|k| self.basis.vec_mul(&k[..r1]).expect("shape"))
            .collect();
        Self::from_generators(&gens, self.ambient)
    }

    pub fn scale(&self, c: &BigInt) -> Lattice {
        if c.is_zero() {
            return Lattice::zero(self.ambient);
        }
        Self::from_matrix_rows(&self.basis.scale(c))
    }

    /// `a·L` for a map `a` with `a.ncols() == ambient`.
    pub fn map(&self, a: &IntMat) -> Result<Lattice> {
        self.check_dim(a.ncols())?;
        // rows b_i -> (a b_i)^T = b_i a^T
        let img = self.basis.mul(&a.transpose())?;
        Ok(Self::from_matrix_rows(&img))
    }

    /// `{x : a·x ∈ L}`.
    pub fn preimage(a: &IntMat, l: &Lattice) -> Result<Lattice> {
        l.check_dim(a.nrows())?;
        let n = a.ncols();
        let stacked = a.transpose().vstack(&l.basis)?;
        let h = hnf(&stacked);
        let gens: Vec<IntVec> = h.left_kernel().into_iter().map(|k| k[..n].to_vec()).collect();
        Self::from_generators(&gens, n)
    }

    /// `(L ⊗ Q) ∩ Z^n`.
    pub fn radical(&self) -> Lattice {
        let n = self.ambient;
        if self.is_zero() {
            return Lattice::zero(n);
        }
        let annihilator = Lattice::kernel(&self.basis);
        if annihilator.is_zero() {
            return Lattice::full(n);
        }
        Lattice::kernel(annihilator.basis())
    }

    /// Canonical representative of `v + L`: pivot coordinates reduced into `[0, pivot)`.
    pub fn reduce(&self, v: &[BigInt]) -> Result<IntVec> {
        self.check_dim(v.len())?;
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let q = w[p].div_floor(self.basis.get(i, p));
            if !q.is_zero() {
                for (wj, bj) in w.iter_mut().zip(self.basis.row(i)) {
                    *wj -= &q * bj;
                }
            }
        }
        Ok(w)
    }

    /// Whether `a·L ⊆ L` for every matrix in `mats`.
    pub fn is_invariant(&self, mats: &[IntMat]) -> Result<bool> {
        for a in mats {
            for r in self.basis.rows_iter() {
                if !self.member(&a.mul_vec(r)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Back-substitution through an echelon basis.
fn echelon_coords(basis: &IntMat, pivots: &[usize], v: &[BigInt]) -> Option<IntVec> {
    let mut w = v.to_vec();
    let mut out = Vec::with_capacity(pivots.len());
    for (i, &p) in pivots.iter().enumerate() {
        let (q, r) = w[p].div_rem(basis.get(i, p));
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (wj, bj) in w.iter_mut().zip(basis.row(i)) {
                *wj -= &q * bj;
            }
        }
        out.push(q);
    }
    if vec_is_zero(&w) {
        Some(out)
    } else {
        None
    }
}

/// `[sup : sub]`.
pub fn index(sub: &Lattice, sup: &Lattice) -> Result<Index> {
    if !sup.contains(sub)? {
        return Err(Error::NotASublattice);
    }
    if sub.rank() < sup.rank() {
        return Ok(Index::Infinite);
    }
    let rows: Vec<IntVec> = sub
        .basis
        .rows_iter()
        .map(|r| sup.coords(r).map(|c| c.expect("checked containment")))
        .collect::<Result<_>>()?;
    let c = IntMat::from_rows(rows, sup.rank())?;
    Ok(Index::Finite(c.det()?.abs()))
}

/// Some integer solution of `a·x = b`.
pub fn solve_integer(a: &IntMat, b: &[BigInt]) -> Result<Option<IntVec>> {
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: b.len() });
    }
    let h = hnf(&a.transpose());
    let Some(z) = echelon_coords(&h.form, &h.pivots, b) else {
        return Ok(None);
    };
    let mut x = vec![BigInt::zero(); a.ncols()];
    for (k, zk) in z.iter().enumerate() {
        if zk.is_zero() {
            continue;
        }
        for (xj, uj) in x.iter_mut().zip(h.transform.row(k)) {
            *xj += zk * uj;
        }
    }
    Ok(Some(x))
}

/// The image of `offset + L` in `Z^n / modulus`, as canonical representatives.
pub fn coset_residues(l: &Lattice, offset: &[BigInt], modulus: &Lattice) -> Result<Vec<IntVec>> {
    l.check_dim(modulus.ambient)?;
    if !modulus.is_full_rank() {
        return Err(Error::ModulusRankDeficient);
    }
    let zero = modulus.reduce(&vec![BigInt::zero(); l.ambient])?;
    let gens: Vec<IntVec> = l.basis.rows_iter().map(|r| modulus.reduce(r)).collect::<Result<_>>()?;
    let mut seen: HashSet<IntVec> = HashSet::from([zero.clone()]);
    let mut order = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = modulus.reduce(&crate::matrix::vec_add(&x, g))?;
            if seen.insert(y.clone()) {
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<IntVec> = order
        .iter()
        .map(|x| modulus.reduce(&crate::matrix::vec_add(x, offset)))
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

/// Ordered tuples of positive integers of length `r` with product `k`.
fn ordered_factorizations(k: u64, r: usize) -> Vec<Vec<u64>> {
    if r == 0 {
        return if k == 1 { vec![vec![]] } else { vec![] };
    }
    if r == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for d in 1..=k {
        if k.is_multiple_of(d) {
            for mut rest in ordered_factorizations(k / d, r - 1) {
                rest.insert(0, d);
                out.push(rest);
            }
        }
    }
    out
}

/// Visits every upper-triangular HNF coordinate matrix of size `r` whose
/// determinant is at most `max_index`, in increasing determinant. Row `i` has
/// pivot `d_i` at column `i`; the entries above the pivot of column `j` range
/// over `[0, d_j)`.
pub fn for_each_hnf_shape<F>(r: usize, max_index: u64, mut f: F) -> ControlFlow<()>
where
    F: FnMut(u64, &[Vec<i64>]) -> ControlFlow<()>,
{
    let slots: Vec<(usize, usize)> = (0..r).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    for k in 1..=max_index {
        for diag in ordered_factorizations(k, r) {
            let mut m = vec![vec![0i64; r]; r];
            for i in 0..r {
                m[i][i] = diag[i] as i64;
            }
            loop {
                f(k, &m)?;
                // odometer over the above-pivot slots, last slot fastest
                let mut advanced = false;
                for &(i, j) in slots.iter().rev() {
                    m[i][j] += 1;
                    if m[i][j] < diag[j] as i64 {
                        advanced = true;
                        break;
                    }
                    m[i][j] = 0;
                }
                if !advanced {
                    break;
                }
            }
        }
    }
    ControlFlow::Continue(())
}

/// All sublattices of the full-rank `l` of index at most `max_index` that pass
/// `filter`, in increasing index. Fails once more than `cap` are collected.
pub fn enumerate_sublattices<F>(
    l: &Lattice,
    max_index: u64,
    mut filter: F,
    cap: usize,
) -> Result<Vec<Lattice>>
where
    F: FnMut(&Lattice) -> bool,
{
    if !l.is_full_rank() {
        return Err(Error::ModulusRankDeficient);
    }
    let r = l.rank();
    let mut out = Vec::new();
    let mut overflow = false;
    let _ = for_each_hnf_shape(r, max_index.max(1), |_, c| {
        let rows: Vec<IntVec> = c.iter().map(|row| crate::matrix::ivec(row)).collect();
        let cm = IntMat::from_rows(rows, r).expect("square");
        let sub = Lattice::from_matrix_rows(&cm.mul(l.basis()).expect("shape"));
        if filter(&sub) {
            out.push(sub);
            if out.len() > cap {
                overflow = true;
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(Error::SublatticeBudget(cap));
    }
    Ok(out)
}

/// A lattice scaled by `1/den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatLattice {
    pub num: Lattice,
    pub den: BigInt,
}

impl RatLattice {
    pub fn new(num: Lattice, den: BigInt) -> Result<Self> {
        if !den.is_positive() {
            return Err(Error::InvalidInput("denominator must be positive".into()));
        }
        let mut g = den.clone();
        for x in num.basis().rows_iter().flatten() {
            g = g.gcd(x);
        }
        if g.is_one() {
            return Ok(RatLattice { num, den });
        }
        let basis = IntMat::from_rows(
            num.basis().rows_iter().map(|r| r.iter().map(|x| x / &g).collect()).collect(),
            num.ambient(),
        )?;
        Ok(RatLattice { num: Lattice::from_matrix_rows(&basis), den: den / g })
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    /// Whether the rational vector `v / vden` lies in the lattice.
    pub fn member_scaled(&self, v: &[BigInt], vden: &BigInt) -> Result<bool> {
        // v/vden = x/den  <=>  v·den = x·vden
        let lhs: IntVec = v.iter().map(|x| x * &self.den).collect();
        if lhs.iter().any(|x| !x.is_multiple_of(vden)) {
            return Ok(false);
        }
        let x: IntVec = lhs.iter().map(|y| y / vden).collect();
        self.num.member(&x)
    }
}
