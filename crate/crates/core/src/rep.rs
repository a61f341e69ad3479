//! Integral representations `ρ: G → GL(h, Z)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::lattice::Lattice;
use crate::matrix::IntMat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntRep {
    group: Arc<FiniteGroup>,
    dim: usize,
    mats: Vec<IntMat>,
}

impl IntRep {
    /// Builds and validates a representation.
    pub fn new(group: FiniteGroup, mats: Vec<IntMat>) -> Result<Self> {
        Self::with_shared_group(Arc::new(group), mats)
    }

    pub fn with_shared_group(group: Arc<FiniteGroup>, mats: Vec<IntMat>) -> Result<Self> {
        let dim = mats.first().map_or(0, IntMat::nrows);
        let rep = IntRep { group, dim, mats };
        rep.validate()?;
        Ok(rep)
    }

    /// The trivial action of `group` on `Z^dim`.
    pub fn trivial(group: FiniteGroup, dim: usize) -> Self {
        let mats = vec![IntMat::identity(dim); group.order()];
        IntRep { group: Arc::new(group), dim, mats }
    }

    /// Checks shapes, the homomorphism property and unimodularity.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        if self.mats.len() != g.order() {
            return Err(Error::DimensionMismatch { expected: g.order(), found: self.mats.len() });
        }
        for m in &self.mats {
            if m.nrows() != self.dim || m.ncols() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: m.nrows() });
            }
            if !m.det()?.abs().is_one() {
                return Err(Error::NonUnimodular);
            }
        }
        if self.mats[0] != IntMat::identity(self.dim) {
            return Err(Error::NotAHomomorphism(0, 0));
        }
        for a in g.elements() {
            for b in g.elements() {
                if self.mats[a].mul(&self.mats[b])? != self.mats[g.mul(a, b)] {
                    return Err(Error::NotAHomomorphism(a, b));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn shared_group(&self) -> Arc<FiniteGroup> {
        Arc::clone(&self.group)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mats(&self) -> &[IntMat] {
        &self.mats
    }

    pub fn mat(&self, g: GroupElement) -> &IntMat {
        &self.mats[g]
    }

    /// `ρ(g)·v`.
    pub fn act(&self, g: GroupElement, v: &[BigInt]) -> Vec<BigInt> {
        self.mats[g].mul_vec(v).expect("vector has the representation's dimension")
    }

    /// Traces `χ(g) = tr ρ(g)`.
    pub fn character(&self) -> Vec<i64> {
        self.mats.iter().map(|m| m.trace().to_i64().expect("trace bounded by dim")).collect()
    }

    /// `Σ_g values(g⁻¹)·ρ(g)`.
    pub fn varpi(&self, values: &[i64]) -> Result<CharacterMap> {
        let g = &self.group;
        if values.len() != g.order() {
            return Err(Error::DimensionMismatch { expected: g.order(), found: values.len() });
        }
        for class in g.conjugacy_classes() {
            if class.iter().any(|&x| values[x] != values[class[0]]) {
                return Err(Error::NotClassConstant);
            }
        }
        let mut matrix = IntMat::zeros(self.dim, self.dim);
        for x in g.elements() {
            let c = values[g.inv(x)];
            if c != 0 {
                matrix = matrix.add(&self.mats[x].scale(&BigInt::from(c)))?;
            }
        }
        Ok(CharacterMap { values: values.to_vec(), matrix, scalar: None })
    }

    /// `id − ρ(g)`.
    pub fn one_minus(&self, g: GroupElement) -> IntMat {
        IntMat::identity(self.dim).sub(&self.mats[g]).expect("square")
    }

    /// `W_g = Im(id − ρ(g))`.
    pub fn w_lattice(&self, g: GroupElement) -> Lattice {
        Lattice::image(&self.one_minus(g))
    }

    /// `V_g = √W_g`.
    pub fn v_lattice(&self, g: GroupElement) -> Lattice {
        self.w_lattice(g).radical()
    }

    /// `ker(id − ρ(g))`.
    pub fn fixed_lattice(&self, g: GroupElement) -> Lattice {
        Lattice::kernel(&self.one_minus(g))
    }

    /// Whether `a` commutes with every `ρ(g)`.
    pub fn is_g_map(&self, a: &IntMat) -> Result<bool> {
        for m in &self.mats {
            if a.mul(m)? != m.mul(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `L` is mapped into itself by every `ρ(g)`.
    pub fn is_invariant(&self, l: &Lattice) -> Result<bool> {
        l.is_invariant(&self.mats)
    }
}

/// An integer-valued class function together with its realized map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterMap {
    pub values: Vec<i64>,
    /// `Σ_g values(g⁻¹)·ρ(g)`.
    pub matrix: IntMat,
    /// The scalar by which the map acts on its own isotypic part, when known.
    pub scalar: Option<BigInt>,
}

impl CharacterMap {
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Whether the map acts as `c·id` on the given vectors.
    pub fn acts_as_scalar_on(&self, vectors: &[Vec<BigInt>], c: &BigInt) -> Result<bool> {
        for v in vectors {
            let image = self.matrix.mul_vec(v)?;
            if image.iter().zip(v).any(|(a, b)| *a != b * c) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ivec;

    fn swap() -> IntRep {
        let (g, m) = FiniteGroup::from_matrix_generators(&[IntMat::from_i64(&[&[0, 1], &[1, 0]])], 8).unwrap();
        IntRep::new(g, m).unwrap()
    }

    fn rot4() -> IntRep {
        let (g, m) = FiniteGroup::from_matrix_generators(&[IntMat::from_i64(&[&[0, -1], &[1, 0]])], 8).unwrap();
        IntRep::new(g, m).unwrap()
    }

    #[test]
    fn validation() {
        assert!(IntRep::trivial(FiniteGroup::cyclic(3), 2).validate().is_ok());
        assert!(rot4().validate().is_ok());
        let bad = vec![IntMat::identity(2), IntMat::from_i64(&[&[0, -1], &[1, 0]])];
        assert!(matches!(IntRep::new(FiniteGroup::cyclic(2), bad), Err(Error::NotAHomomorphism(1, 1))));
        let bad = vec![IntMat::identity(1), IntMat::from_i64(&[&[2]])];
        assert!(matches!(IntRep::new(FiniteGroup::cyclic(2), bad), Err(Error::NonUnimodular)));
    }

    #[test]
    fn characters() {
        assert_eq!(IntRep::trivial(FiniteGroup::cyclic(3), 4).character(), vec![4, 4, 4]);
        assert_eq!(swap().character(), vec![2, 0]);
        let r = rot4();
        // element order of the closure follows powers of the generator
        let mut chi = r.character();
        assert_eq!(chi[0], 2);
        chi.sort_unstable();
        assert_eq!(chi, vec![-2, 0, 0, 2]);
    }

    #[test]
    fn varpi_examples() {
        let s = swap();
        assert_eq!(s.varpi(&[1, 1]).unwrap().matrix, IntMat::from_i64(&[&[1, 1], &[1, 1]]));
        assert_eq!(s.varpi(&[1, -1]).unwrap().matrix, IntMat::from_i64(&[&[1, -1], &[-1, 1]]));
        assert!(s.varpi(&[0, 0]).unwrap().is_zero());
        let r = rot4();
        let m = r.varpi(&r.character()).unwrap().matrix;
        assert!(r.is_g_map(&m).unwrap());
        // S3 has classes of size 2 and 3
        let (g, mats) = FiniteGroup::from_matrix_generators(
            &[IntMat::from_i64(&[&[0, -1], &[1, -1]]), IntMat::from_i64(&[&[0, 1], &[1, 0]])],
            8,
        )
        .unwrap();
        let s3 = IntRep::new(g, mats).unwrap();
        let mut vals = vec![0; 6];
        vals[1] = 1;
        assert!(matches!(s3.varpi(&vals), Err(Error::NotClassConstant)));
    }

    #[test]
    fn w_v_fixed() {
        let r = IntRep::new(FiniteGroup::cyclic(2), vec![IntMat::identity(1), IntMat::from_i64(&[&[-1]])]).unwrap();
        assert_eq!(r.w_lattice(0), Lattice::zero(1));
        assert_eq!(r.v_lattice(0), Lattice::zero(1));
        assert_eq!(r.fixed_lattice(0), Lattice::full(1));
        assert_eq!(r.w_lattice(1), Lattice::from_generators(&[ivec(&[2])], 1).unwrap());
        assert_eq!(r.v_lattice(1), Lattice::full(1));
        assert_eq!(r.fixed_lattice(1), Lattice::zero(1));
    }
}
