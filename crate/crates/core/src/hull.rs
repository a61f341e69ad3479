//! The square hull: projections of `Z^h` onto the rational isotypic
//! components, with per-component actions and constituent dimensions.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::lattice::{Lattice, RatLattice};
use crate::matrix::{unit_vec, IntMat, IntVec};
use crate::modp::{galois_orbit_sums, reduce, split, splitting_prime};
use crate::rep::{CharacterMap, IntRep};

#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    pub index: usize,
    /// `M_i = π_i(Z^h)`.
    pub lattice: RatLattice,
    /// `|G|·π_i`, an integer matrix.
    pub projector: IntMat,
    /// `|G|`, the denominator of the projector.
    pub projector_den: BigInt,
    /// Coordinates of `π_i(v)` in the basis of `M_i`, as a map `Z^h → Z^{r_i}`.
    pub coords: IntMat,
    /// Action of `G` on `M_i` in its basis.
    pub comp_rep: IntRep,
    /// Dimension of an absolutely irreducible constituent.
    pub d: usize,
    /// Number of Galois-conjugate constituent characters.
    pub orbit_size: usize,
    /// Multiplicity of each constituent.
    pub multiplicity: usize,
    pub orbit_char: CharacterMap,
}

impl IsotypicComponent {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Coordinates of `π_i(v)`.
    pub fn project(&self, v: &[BigInt]) -> IntVec {
        self.coords.mul_vec(v).expect("vector has ambient dimension")
    }

    /// `(W_g(M_i), V_g(M_i))` in component coordinates.
    pub fn w_v(&self, g: GroupElement) -> (Lattice, Lattice) {
        let w = self.comp_rep.w_lattice(g);
        let v = w.radical();
        (w, v)
    }

    /// Whether `g` acts trivially on the component.
    pub fn acts_trivially(&self, g: GroupElement) -> bool {
        self.comp_rep.mat(g) == &IntMat::identity(self.rank())
    }
}

#[derive(Clone, Debug)]
pub struct SquareHull {
    pub components: Vec<IsotypicComponent>,
    /// The splitting prime used.
    pub prime: u64,
}

impl SquareHull {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.d).collect()
    }

    /// `Σ d_i`.
    pub fn naive_bound(&self) -> usize {
        self.dims().iter().sum()
    }

    /// `(W_g(M_i), V_g(M_i))` in component coordinates.
    pub fn component_w_v(&self, i: usize, g: GroupElement) -> (Lattice, Lattice) {
        self.components[i].w_v(g)
    }

    /// The direct sum `⊕ M_i` as `num / den`.
    pub fn direct_sum(&self, ambient: usize) -> Result<RatLattice> {
        let den = self.components.iter().fold(BigInt::from(1), |acc, c| acc.lcm(&c.lattice.den));
        let mut gens = Vec::new();
        for c in &self.components {
            let f = &den / &c.lattice.den;
            gens.extend(c.lattice.num.basis().rows_iter().map(|r| r.iter().map(|x| x * &f).collect::<Vec<_>>()));
        }
        RatLattice::new(Lattice::from_generators(&gens, ambient)?, den)
    }

    /// `|G|·(⊕M_i) ⊆ Z^h ⊆ ⊕M_i`.
    pub fn sandwich_holds(&self, rep: &IntRep) -> Result<bool> {
        let h = rep.dim();
        let sum = self.direct_sum(h)?;
        let order = BigInt::from(rep.group().order());
        let upper = (0..h).map(|j| sum.member_scaled(&unit_vec(h, j), &BigInt::from(1))).collect::<Result<Vec<_>>>()?;
        let lower = sum
            .num
            .basis()
            .rows_iter()
            .flatten()
            .all(|x| (x * &order).is_multiple_of(&sum.den));
        Ok(upper.into_iter().all(|b| b) && lower)
    }
}

/// Computes the square hull with the least admissible splitting prime.
pub fn square_hull(rep: &IntRep) -> Result<SquareHull> {
    let mut p = splitting_prime(rep)?;
    let order = rep.group().order() as u64;
    let exp = rep.group().exponent();
    // retry with later primes if a prime misbehaves
    for _ in 0..8 {
        match square_hull_with_prime(rep, p) {
            Err(Error::NonSplittingPrime(_)) | Err(Error::LiftOutOfRange(_)) => {
                p = crate::modp::find_prime(1, exp, order, p + 1, crate::modp::PRIME_SEARCH_BOUND)?;
            }
            other => return other,
        }
    }
    Err(Error::SplittingPrimeFailure(format!("gave up after prime {p}")))
}

pub fn square_hull_with_prime(rep: &IntRep, p: u64) -> Result<SquareHull> {
    let group = rep.group();
    let h = rep.dim();
    let order = BigInt::from(group.order());
    let constituents = split(&reduce(rep, p)?, group)?;
    let orbits = galois_orbit_sums(&constituents, group, p)?;
    let mut components = Vec::new();
    for (index, orbit) in orbits.iter().enumerate() {
        let d = orbit.dim;
        let mut cm = rep.varpi(&orbit.values)?;
        if !group.order().is_multiple_of(d) {
            return Err(Error::Internal(format!("constituent dimension {d} does not divide |G|")));
        }
        cm.scalar = Some(BigInt::from(group.order() / d));
        let proj = cm.matrix.scale(&BigInt::from(d));
        if proj.mul(&proj)? != proj.scale(&order) {
            return Err(Error::NonSplittingPrime(p));
        }
        let lattice = RatLattice::new(Lattice::image(&proj), order.clone())?;
        let r = lattice.rank();
        let shrink = &order / &lattice.den;
        let mut coord_cols = Vec::with_capacity(h);
        for j in 0..h {
            let x: IntVec = proj.col(j).iter().map(|v| v / &shrink).collect();
            let c = lattice.num.coords(&x)?.ok_or_else(|| Error::Internal("projection outside M_i".into()))?;
            coord_cols.push(c);
        }
        let coords = IntMat::from_cols(&coord_cols, r)?;
        let basis = lattice.num.basis_rows();
        let mut mats = Vec::with_capacity(group.order());
        for g in group.elements() {
            let cols: Vec<IntVec> = basis
                .iter()
                .map(|b| {
                    lattice.num.coords(&rep.act(g, b))?.ok_or_else(|| Error::Internal("M_i is not invariant".into()))
                })
                .collect::<Result<_>>()?;
            mats.push(IntMat::from_cols(&cols, r)?);
        }
        let comp_rep = IntRep::with_shared_group(rep.shared_group(), mats)?;
        components.push(IsotypicComponent {
            index,
            lattice,
            projector: proj,
            projector_den: order.clone(),
            coords,
            comp_rep,
            d,
            orbit_size: orbit.members.len(),
            multiplicity: constituents[orbit.members[0]].multiplicity,
            orbit_char: cm,
        });
    }
    let hull = SquareHull { components, prime: p };
    check_hull(rep, &hull)?;
    Ok(hull)
}

fn check_hull(rep: &IntRep, hull: &SquareHull) -> Result<()> {
    let h = rep.dim();
    let order = BigInt::from(rep.group().order());
    let ranks: usize = hull.components.iter().map(|c| c.rank()).sum();
    if ranks != h {
        return Err(Error::Internal(format!("component ranks sum to {ranks}, expected {h}")));
    }
    let mut total = IntMat::zeros(h, h);
    for (i, a) in hull.components.iter().enumerate() {
        total = total.add(&a.projector)?;
        for b in &hull.components[i + 1..] {
            if !a.projector.mul(&b.projector)?.is_zero() {
                return Err(Error::Internal("projectors are not orthogonal".into()));
            }
        }
    }
    if total != IntMat::scalar(h, &order) {
        return Err(Error::Internal("projectors do not sum to the identity".into()));
    }
    Ok(())
}

/// Irreducibility over `Q`: a single component whose constituents each occur once.
pub fn is_irreducible(rep: &IntRep) -> Result<bool> {
    let hull = square_hull(rep)?;
    Ok(hull.len() == 1 && hull.components[0].multiplicity == 1)
}

/// `(W_g(M_i), V_g(M_i))` in the coordinates of `M_i`.
pub fn component_w_v(hull: &SquareHull, i: usize, g: GroupElement) -> Result<(Lattice, Lattice)> {
    if i >= hull.len() {
        return Err(Error::InvalidInput(format!("component {i} out of range")));
    }
    Ok(hull.component_w_v(i, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::matrix::ivec;

    fn rep_from(gens: &[IntMat]) -> IntRep {
        let (g, m) = FiniteGroup::from_matrix_generators(gens, 64).unwrap();
        IntRep::new(g, m).unwrap()
    }

    fn diag(xs: &[i64]) -> IntMat {
        let n = xs.len();
        let rows: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { xs[i] } else { 0 }).collect()).collect();
        IntMat::from_i64_rows(&rows, n).unwrap()
    }

    #[test]
    fn swap_hull() {
        let rep = rep_from(&[IntMat::from_i64(&[&[0, 1], &[1, 0]])]);
        let hull = square_hull(&rep).unwrap();
        assert_eq!(hull.len(), 2);
        let two = BigInt::from(2);
        // ordered by lifted character: the sign character (1,-1) first
        assert_eq!(hull.components[0].lattice.num, Lattice::from_generators(&[ivec(&[1, -1])], 2).unwrap());
        assert_eq!(hull.components[1].lattice.num, Lattice::from_generators(&[ivec(&[1, 1])], 2).unwrap());
        assert!(hull.components.iter().all(|c| c.lattice.den == two && c.d == 1));
        assert!(hull.sandwich_holds(&rep).unwrap());
        assert!(!is_irreducible(&rep).unwrap());
    }

    #[test]
    fn diagonal_hull() {
        let rep = rep_from(&[diag(&[-1, 1, -1]), diag(&[1, -1, -1])]);
        let hull = square_hull(&rep).unwrap();
        assert_eq!(hull.dims(), vec![1, 1, 1]);
        let sum = hull.direct_sum(3).unwrap();
        assert_eq!(sum.den, BigInt::from(1));
        assert_eq!(sum.num, Lattice::full(3));
        assert_eq!(hull.naive_bound(), 3);
    }

    #[test]
    fn rotation_hull() {
        let rep = rep_from(&[IntMat::from_i64(&[&[0, -1], &[1, 0]])]);
        let hull = square_hull(&rep).unwrap();
        assert_eq!(hull.len(), 1);
        assert_eq!(hull.components[0].rank(), 2);
        assert_eq!(hull.components[0].d, 1);
        assert_eq!(hull.components[0].orbit_size, 2);
        assert!(is_irreducible(&rep).unwrap());
        assert!(!is_irreducible(&IntRep::trivial(FiniteGroup::cyclic(1), 2)).unwrap());
    }

    #[test]
    fn component_lattices() {
        let rep = rep_from(&[diag(&[-1, 1, -1]), diag(&[1, -1, -1])]);
        let hull = square_hull(&rep).unwrap();
        for g in rep.group().elements() {
            for (i, c) in hull.components.iter().enumerate() {
                let (w, v) = component_w_v(&hull, i, g).unwrap();
                if c.acts_trivially(g) {
                    assert!(w.is_zero() && v.is_zero());
                } else {
                    assert_eq!(v, Lattice::full(1));
                    assert_eq!(w, Lattice::scaled_full(1, &BigInt::from(2)));
                }
            }
        }
    }
}
