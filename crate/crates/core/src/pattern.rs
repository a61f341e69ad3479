//! Affine regions `c + K` with finitely many affine holes removed. These decide
//! which membership patterns are realized by some integer point.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{coset_residues, index, solve_integer, Index, Lattice};
use crate::matrix::{vec_add, vec_sub, IntMat, IntVec};

/// `offset + lattice`, with the offset reduced to its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub offset: IntVec,
    pub lattice: Lattice,
}

impl Coset {
    pub fn new(offset: IntVec, lattice: Lattice) -> Result<Self> {
        let offset = lattice.reduce(&offset)?;
        Ok(Coset { offset, lattice })
    }

    pub fn full(n: usize) -> Self {
        Coset { offset: vec![BigInt::zero(); n], lattice: Lattice::full(n) }
    }

    pub fn ambient(&self) -> usize {
        self.lattice.ambient()
    }

    pub fn contains_point(&self, x: &[BigInt]) -> Result<bool> {
        self.lattice.member(&vec_sub(x, &self.offset))
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Coset) -> Result<bool> {
        Ok(self.lattice.contains(&other.lattice)? && self.contains_point(&other.offset)?)
    }

    pub fn intersect(&self, other: &Coset) -> Result<Option<Coset>> {
        let n = self.ambient();
        let diff = vec_sub(&other.offset, &self.offset);
        let mut cols: Vec<IntVec> = self.lattice.basis_rows();
        let r1 = cols.len();
        cols.extend(other.lattice.basis_rows().into_iter().map(|r| r.iter().map(|x| -x).collect()));
        let point = if cols.is_empty() {
            if diff.iter().all(Zero::is_zero) {
                self.offset.clone()
            } else {
                return Ok(None);
            }
        } else {
            let a = IntMat::from_cols(&cols, n)?;
            let Some(y) = solve_integer(&a, &diff)? else {
                return Ok(None);
            };
            let mut p = self.offset.clone();
            for (c, b) in y[..r1].iter().zip(self.lattice.basis().rows_iter()) {
                if !c.is_zero() {
                    p = vec_add(&p, &b.iter().map(|x| x * c).collect::<Vec<_>>());
                }
            }
            p
        };
        Ok(Some(Coset::new(point, self.lattice.intersect(&other.lattice)?)?))
    }
}

/// A coset with holes. Every hole is a sub-coset of the base.
#[derive(Clone, Debug)]
pub struct Region {
    pub base: Coset,
    pub holes: Vec<Coset>,
}

/// Outcome of a nonemptiness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Occupancy {
    Empty,
    /// Base coordinates of a residue class avoiding every finite-index hole,
    /// modulo the intersection of those holes.
    Occupied(Vec<BigInt>),
}

impl Region {
    pub fn new(base: Coset) -> Self {
        Region { base, holes: Vec::new() }
    }

    /// `self ∩ c`.
    pub fn restrict(&self, c: &Coset) -> Result<Option<Region>> {
        let Some(base) = self.base.intersect(c)? else {
            return Ok(None);
        };
        let mut holes = Vec::with_capacity(self.holes.len());
        for h in &self.holes {
            if let Some(x) = h.intersect(&base)? {
                holes.push(x);
            }
        }
        Ok(Some(Region { base, holes }))
    }

    /// `self ∖ c`.
    pub fn exclude(&self, c: &Coset) -> Result<Region> {
        let mut out = self.clone();
        if let Some(x) = c.intersect(&self.base)? {
            out.holes.push(x);
        }
        Ok(out)
    }

    /// A coset is never covered by finitely many cosets of lower-rank
    /// lattices, so only the finite-index holes matter. Those are decided by
    /// scanning residues modulo their common intersection.
    pub fn occupancy(&self, residue_budget: u64) -> Result<Occupancy> {
        let r = self.base.lattice.rank();
        let finite: Vec<&Coset> = self.holes.iter().filter(|h| h.lattice.rank() == r).collect();
        if finite.is_empty() {
            return Ok(Occupancy::Occupied(vec![BigInt::zero(); r]));
        }
        if r == 0 {
            return Ok(Occupancy::Empty);
        }
        let mut offsets = Vec::with_capacity(finite.len());
        let mut lats = Vec::with_capacity(finite.len());
        for h in &finite {
            let o = self.base_coords(&h.offset)?;
            let gens: Vec<IntVec> =
                h.lattice.basis().rows_iter().map(|row| self.base_coords(row)).collect::<Result<_>>()?;
            let l = Lattice::from_generators(&gens, r)?;
            if l.is_full_rank() && l == Lattice::full(r) {
                // the hole is the whole base
                return Ok(Occupancy::Empty);
            }
            offsets.push(o);
            lats.push(l);
        }
        let mut common = lats[0].clone();
        for l in &lats[1..] {
            common = common.intersect(l)?;
        }
        let count = match index(&common, &Lattice::full(r))? {
            Index::Finite(n) => n,
            Index::Infinite => return Err(Error::Internal("finite-index holes with infinite intersection".into())),
        };
        if count.to_u64().is_none_or(|c| c > residue_budget) {
            return Err(Error::BudgetExceeded(format!("{count} residues exceed the residue budget {residue_budget}")));
        }
        let zero = vec![BigInt::zero(); r];
        for z in coset_residues(&Lattice::full(r), &zero, &common)? {
            let mut free = true;
            for (o, l) in offsets.iter().zip(&lats) {
                if l.member(&vec_sub(&z, o))? {
                    free = false;
                    break;
                }
            }
            if free {
                return Ok(Occupancy::Occupied(z));
            }
        }
        Ok(Occupancy::Empty)
    }

    pub fn is_nonempty(&self, residue_budget: u64) -> Result<bool> {
        Ok(self.occupancy(residue_budget)? != Occupancy::Empty)
    }

    /// Coordinates of `x − offset` in the base lattice.
    fn base_coords(&self, x: &[BigInt]) -> Result<IntVec> {
        let d = vec_sub(x, &self.base.offset);
        self.base
            .lattice
            .coords(&d)?
            .ok_or_else(|| Error::Internal("hole outside its region".into()))
    }

    fn point_at(&self, z: &[BigInt]) -> IntVec {
        let mut p = self.base.offset.clone();
        for (c, b) in z.iter().zip(self.base.lattice.basis().rows_iter()) {
            if !c.is_zero() {
                p = vec_add(&p, &b.iter().map(|x| x * c).collect::<Vec<_>>());
            }
        }
        p
    }

    fn avoids_holes(&self, p: &[BigInt]) -> Result<bool> {
        for h in &self.holes {
            if h.contains_point(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// An explicit point of the region, searched among the points of a free
    /// residue class whose coordinates along the class lattice are bounded by
    /// `height_cap` (in increasing sup-norm). `None` if the search misses.
    pub fn find_point(&self, height_cap: u32, residue_budget: u64, max_candidates: usize) -> Result<Option<IntVec>> {
        let Occupancy::Occupied(z) = self.occupancy(residue_budget)? else {
            return Ok(None);
        };
        let r = self.base.lattice.rank();
        // steps that stay inside the free residue class
        let steps: Vec<IntVec> = {
            let mut common = Lattice::full(r);
            for h in self.holes.iter().filter(|h| h.lattice.rank() == r) {
                let gens: Vec<IntVec> =
                    h.lattice.basis().rows_iter().map(|row| self.base_coords(row)).collect::<Result<_>>()?;
                common = common.intersect(&Lattice::from_generators(&gens, r)?)?;
            }
            common.basis_rows()
        };
        let mut tried = 0usize;
        for height in 0..=height_cap as i64 {
            let mut found = None;
            for_each_sup_shell(steps.len(), height, &mut |c: &[i64]| {
                tried += 1;
                let mut coords = z.clone();
                for (ci, s) in c.iter().zip(&steps) {
                    if *ci != 0 {
                        coords = vec_add(&coords, &s.iter().map(|x| x * ci).collect::<Vec<_>>());
                    }
                }
                let p = self.point_at(&coords);
                match self.avoids_holes(&p) {
                    Ok(true) => {
                        found = Some(Ok(p));
                        false
                    }
                    Ok(false) => tried < max_candidates,
                    Err(e) => {
                        found = Some(Err(e));
                        false
                    }
                }
            });
            if let Some(p) = found {
                return p.map(Some);
            }
            if tried >= max_candidates {
                break;
            }
        }
        Ok(None)
    }
}

/// Calls `f` on every vector in `Z^r` with sup-norm exactly `height` until it
/// returns `false`.
fn for_each_sup_shell(r: usize, height: i64, f: &mut dyn FnMut(&[i64]) -> bool) {
    if r == 0 {
        if height == 0 {
            f(&[]);
        }
        return;
    }
    let mut c = vec![-height; r];
    loop {
        if c.iter().any(|x| x.abs() == height) && !f(&c) {
            return;
        }
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] < height {
                c[i] += 1;
                break;
            }
            c[i] = -height;
        }
    }
}

/// Minimum of `Σ_{i∈K} weights[i]` over `K` meeting every set in `sets`
/// (bitmasks over the weights). `None` when some set is empty.
pub fn min_hitting_weight(weights: &[usize], sets: &[u64]) -> Option<usize> {
    if sets.contains(&0) {
        return None;
    }
    let l = weights.len();
    let mut best = weights.iter().sum::<usize>();
    for k in 0u64..(1u64 << l) {
        let w: usize = (0..l).filter(|i| k >> i & 1 == 1).map(|i| weights[i]).sum();
        if w < best && sets.iter().all(|&s| s & k != 0) {
            best = w;
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ivec;

    fn lat(rows: &[&[i64]], n: usize) -> Lattice {
        Lattice::from_generators(&rows.iter().map(|r| ivec(r)).collect::<Vec<_>>(), n).unwrap()
    }

    #[test]
    fn coset_intersection() {
        let a = Coset::new(ivec(&[1]), lat(&[&[2]], 1)).unwrap();
        let b = Coset::new(ivec(&[0]), lat(&[&[3]], 1)).unwrap();
        let c = a.intersect(&b).unwrap().unwrap();
        assert_eq!(c.lattice, lat(&[&[6]], 1));
        assert_eq!(c.offset, ivec(&[3]));
        let even = Coset::new(ivec(&[0]), lat(&[&[2]], 1)).unwrap();
        assert!(a.intersect(&even).unwrap().is_none());
        let p = Coset::new(ivec(&[1, 1]), Lattice::zero(2)).unwrap();
        let line = Coset::new(ivec(&[0, 0]), lat(&[&[1, 1]], 2)).unwrap();
        assert_eq!(p.intersect(&line).unwrap().unwrap().offset, ivec(&[1, 1]));
    }

    #[test]
    fn holes_of_finite_index() {
        // Z minus 2Z minus 1+2Z is empty; minus 2Z and 1+4Z is not
        let r = Region::new(Coset::full(1));
        let r = r.exclude(&Coset::new(ivec(&[0]), lat(&[&[2]], 1)).unwrap()).unwrap();
        let covered = r.exclude(&Coset::new(ivec(&[1]), lat(&[&[2]], 1)).unwrap()).unwrap();
        assert!(!covered.is_nonempty(1000).unwrap());
        let open = r.exclude(&Coset::new(ivec(&[1]), lat(&[&[4]], 1)).unwrap()).unwrap();
        assert!(open.is_nonempty(1000).unwrap());
        let p = open.find_point(4, 1000, 10_000).unwrap().unwrap();
        assert_eq!((&p[0] % 4 + 4) % 4, BigInt::from(3));
    }

    #[test]
    fn lower_rank_holes() {
        // Z^2 minus both axes and the diagonal is nonempty
        let mut r = Region::new(Coset::full(2));
        for row in [&[1i64, 0][..], &[0, 1], &[1, 1]] {
            r = r.exclude(&Coset::new(ivec(&[0, 0]), lat(&[row], 2)).unwrap()).unwrap();
        }
        assert!(r.is_nonempty(10).unwrap());
        let p = r.find_point(4, 10, 10_000).unwrap().unwrap();
        assert!(r.avoids_holes(&p).unwrap());
        // a point minus itself is empty
        let pt = Region::new(Coset::new(ivec(&[1, 2]), Lattice::zero(2)).unwrap());
        let gone = pt.exclude(&Coset::new(ivec(&[1, 2]), Lattice::zero(2)).unwrap()).unwrap();
        assert!(!gone.is_nonempty(10).unwrap());
    }

    #[test]
    fn hitting_sets() {
        assert_eq!(min_hitting_weight(&[1, 1, 1], &[0b001, 0b010, 0b100]), Some(3));
        assert_eq!(min_hitting_weight(&[1, 1], &[0b11, 0b01]), Some(1));
        assert_eq!(min_hitting_weight(&[2, 1], &[0b11]), Some(1));
        assert_eq!(min_hitting_weight(&[1], &[0]), None);
        assert_eq!(min_hitting_weight(&[1, 1], &[]), Some(0));
    }
}
