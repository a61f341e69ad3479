//! Finite groups given by Cayley tables over dense indices, identity 0.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::matrix::IntMat;

/// Index of an element; the identity is always 0.
pub type GroupElement = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table; the identity is relabelled to 0 if needed.
    pub fn from_cayley(table: Vec<Vec<usize>>) -> Result<Self> {
        Ok(Self::from_cayley_relabeled(table)?.0)
    }

    /// Like [`from_cayley`](Self::from_cayley) but also returns the relabelling
    /// `old index -> new index`.
    pub fn from_cayley_relabeled(table: Vec<Vec<usize>>) -> Result<(Self, Vec<usize>)> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidTable("table is not square".into()));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidTable(format!("entry {x} out of range")));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or(Error::NoIdentity)?;
        // swap labels 0 and e
        let relabel: Vec<usize> = (0..n)
            .map(|a| if a == e { 0 } else if a == 0 { e } else { a })
            .collect();
        let mut flat = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[relabel[a] * n + relabel[b]] = relabel[table[a][b]];
            }
        }
        let mul = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(a, mul(b, c)) != mul(mul(a, b), c) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| mul(a, b) == 0 && mul(b, a) == 0)
                .ok_or(Error::MissingInverse(a))?;
        }
        Ok((FiniteGroup { order: n, table: flat, inverse }, relabel))
    }

    /// Closure of a set of unimodular integer matrices. Returns the group and
    /// the matrix of every element, with element 0 the identity matrix.
    pub fn from_matrix_generators(gens: &[IntMat], cap: usize) -> Result<(Self, Vec<IntMat>)> {
        let Some(first) = gens.first() else {
            return Err(Error::InvalidInput("no generators given".into()));
        };
        let n = first.nrows();
        for g in gens {
            if !g.is_square() || g.nrows() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.nrows() });
            }
            if !g.det()?.abs().is_one() {
                return Err(Error::NonUnimodular);
            }
        }
        let mut mats = vec![IntMat::identity(n)];
        let mut index: HashMap<IntMat, usize> = HashMap::from([(mats[0].clone(), 0)]);
        let mut next = 0;
        while next < mats.len() {
            for g in gens {
                let m = mats[next].mul(g)?;
                if !index.contains_key(&m) {
                    if mats.len() >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    index.insert(m.clone(), mats.len());
                    mats.push(m);
                }
            }
            next += 1;
        }
        let order = mats.len();
        let mut table = vec![vec![0; order]; order];
        for a in 0..order {
            for b in 0..order {
                table[a][b] = index[&mats[a].mul(&mats[b])?];
            }
        }
        Ok((Self::from_cayley(table)?, mats))
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_cayley(table).expect("cyclic table is a group")
    }

    /// Direct product; the pair `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let m = other.order;
        let n = self.order * m;
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_cayley(table).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        self.inverse[a]
    }

    pub fn pow(&self, a: GroupElement, k: u64) -> GroupElement {
        let mut acc = 0;
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `a·x·a⁻¹`.
    pub fn conj(&self, a: GroupElement, x: GroupElement) -> GroupElement {
        self.mul(self.mul(a, x), self.inv(a))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn element_order(&self, a: GroupElement) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        self.elements().fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    pub fn commutes(&self, a: GroupElement, b: GroupElement) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn centralizer(&self, g: GroupElement) -> Vec<GroupElement> {
        self.elements().filter(|&h| self.commutes(g, h)).collect()
    }

    pub fn center(&self) -> Vec<GroupElement> {
        self.elements().filter(|&z| self.elements().all(|h| self.commutes(z, h))).collect()
    }

    pub fn is_central(&self, g: GroupElement) -> bool {
        self.elements().all(|h| self.commutes(g, h))
    }

    pub fn is_abelian(&self) -> bool {
        self.center().len() == self.order
    }

    pub fn conjugacy_class(&self, g: GroupElement) -> Vec<GroupElement> {
        let mut c: Vec<_> = self.elements().map(|a| self.conj(a, g)).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Classes ordered by their least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<GroupElement>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for g in self.elements() {
            if !seen[g] {
                let c = self.conjugacy_class(g);
                for &x in &c {
                    seen[x] = true;
                }
                out.push(c);
            }
        }
        out
    }

    /// Some `a` with `a·from·a⁻¹ = to`, least index first.
    pub fn conjugators(&self, from: GroupElement, to: GroupElement) -> Vec<GroupElement> {
        self.elements().filter(|&a| self.conj(a, from) == to).collect()
    }
}

/// Whether `m` is invertible over the integers.
pub fn is_unimodular(m: &IntMat) -> Result<bool> {
    Ok(m.is_square() && m.det()?.abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> FiniteGroup {
        FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2))
    }

    #[test]
    fn cayley_examples() {
        let z2 = FiniteGroup::from_cayley(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.order(), 2);
        let k = klein();
        assert_eq!(k.order(), 4);
        assert!(k.elements().all(|a| k.inv(a) == a));
        // a table whose rows are permutations but which is not associative
        let bad = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_cayley(bad), Err(Error::NotAssociative(..))));
        assert!(matches!(
            FiniteGroup::from_cayley(vec![vec![1, 1], vec![1, 1]]),
            Err(Error::NoIdentity)
        ));
    }

    #[test]
    fn identity_is_relabelled() {
        // Z/2 with the identity stored at index 1
        let (g, relabel) = FiniteGroup::from_cayley_relabeled(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(relabel, vec![1, 0]);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn matrix_closure() {
        let (g, mats) = FiniteGroup::from_matrix_generators(&[IntMat::from_i64(&[&[-1]])], 64).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(mats[0], IntMat::identity(1));
        let rot = IntMat::from_i64(&[&[0, -1], &[1, 0]]);
        let (g, mats) = FiniteGroup::from_matrix_generators(&[rot], 64).unwrap();
        assert_eq!(g.order(), 4);
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(mats[a].mul(&mats[b]).unwrap(), mats[g.mul(a, b)]);
            }
        }
        assert!(matches!(
            FiniteGroup::from_matrix_generators(&[IntMat::from_i64(&[&[2]])], 64),
            Err(Error::NonUnimodular)
        ));
        let shear = IntMat::from_i64(&[&[1, 1], &[0, 1]]);
        assert!(matches!(
            FiniteGroup::from_matrix_generators(&[shear], 64),
            Err(Error::CapExceeded(64))
        ));
    }

    #[test]
    fn classes_and_exponent() {
        let k = klein();
        assert_eq!(k.conjugacy_classes().len(), 4);
        assert!(k.elements().all(|g| k.centralizer(g).len() == 4));
        let g = FiniteGroup::cyclic(3).direct_product(&klein());
        assert_eq!(g.order(), 12);
        assert_eq!(g.exponent(), 6);
        // S3 as the symmetries of a triangle
        let r = IntMat::from_i64(&[&[0, -1], &[1, -1]]);
        let s = IntMat::from_i64(&[&[0, 1], &[1, 0]]);
        let (s3, _) = FiniteGroup::from_matrix_generators(&[r, s], 64).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.conjugacy_classes().len(), 3);
        assert_eq!(s3.exponent(), 6);
        for g in s3.elements() {
            let c = s3.centralizer(g);
            assert!(c.contains(&g) && c.contains(&0));
            assert_eq!(c.len() * s3.conjugacy_class(g).len(), 6);
        }
    }
}
