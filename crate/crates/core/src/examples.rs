//! Built-in example groups.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::matrix::IntMat;
use crate::rep::IntRep;
use crate::separability::Tuple;
use crate::vab::VirtAbGroup;

pub const NAMES: [&str; 6] = ["swap", "rot4", "dihedral-line", "six-dim", "diag3", "h0h0"];

/// A named example with optional distinguished data.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub description: &'static str,
    pub group: VirtAbGroup,
    /// Named group elements, e.g. `("g1g3", 5)`.
    pub elements: Vec<(&'static str, GroupElement)>,
    /// A tuple achieving the exponent, when known.
    pub witness: Option<Tuple>,
}

impl Example {
    pub fn element(&self, name: &str) -> Option<GroupElement> {
        self.elements.iter().find(|(n, _)| *n == name).map(|&(_, g)| g)
    }
}

fn diag(xs: &[i64]) -> IntMat {
    let n = xs.len();
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { xs[i] } else { 0 }).collect()).collect();
    IntMat::from_i64_rows(&rows, n).expect("square")
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn klein() -> FiniteGroup {
    FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2))
}

/// `Z/2` swapping the coordinates of `Z^2`.
pub fn swap() -> Result<Example> {
    let rep = IntRep::new(FiniteGroup::cyclic(2), vec![IntMat::identity(2), IntMat::from_i64(&[&[0, 1], &[1, 0]])])?;
    Ok(Example {
        name: "swap",
        description: "Z/2 swapping the two coordinates of Z^2",
        group: VirtAbGroup::new_split(rep)?,
        elements: vec![("e", 0), ("s", 1)],
        witness: None,
    })
}

/// `Z/4` rotating `Z^2` by a quarter turn; element `k` is the `k`-th power.
pub fn rot4() -> Result<Example> {
    let r = IntMat::from_i64(&[&[0, -1], &[1, 0]]);
    let mut mats = vec![IntMat::identity(2)];
    for k in 1..4 {
        mats.push(mats[k - 1].mul(&r)?);
    }
    let rep = IntRep::new(FiniteGroup::cyclic(4), mats)?;
    Ok(Example {
        name: "rot4",
        description: "Z/4 acting on Z^2 by quarter turns",
        group: VirtAbGroup::new_split(rep)?,
        elements: vec![("e", 0), ("r", 1), ("r2", 2), ("r3", 3)],
        witness: None,
    })
}

/// The infinite dihedral group `Z ⋊ Z/2`.
pub fn dihedral_line() -> Result<Example> {
    let rep = IntRep::new(FiniteGroup::cyclic(2), vec![IntMat::identity(1), IntMat::from_i64(&[&[-1]])])?;
    Ok(Example {
        name: "dihedral-line",
        description: "Z/2 acting on Z by negation",
        group: VirtAbGroup::new_split(rep)?,
        elements: vec![("e", 0), ("s", 1)],
        witness: Some(Tuple::from_i64(0, &[1], &[0], &[0], &[0])),
    })
}

/// `Z/3 ⊕ Z/2 ⊕ Z/2` acting on 3×2 integer matrices (row-major in `Z^6`):
/// `g1` cycles the rows, `g2` swaps the columns, `g3` negates.
/// Element `(a, b, c)` has index `4a + 2b + c`.
pub fn six_dim() -> Result<Example> {
    let group = FiniteGroup::cyclic(3).direct_product(&klein());
    let cycle = {
        // new row 1 = old row 3, new row 2 = old row 1, new row 3 = old row 2
        let mut m = IntMat::zeros(6, 6);
        for r in 0..3 {
            for c in 0..2 {
                let src = (r + 2) % 3;
                m.set(r * 2 + c, src * 2 + c, 1.into());
            }
        }
        m
    };
    let swap_cols = {
        let mut m = IntMat::zeros(6, 6);
        for r in 0..3 {
            m.set(r * 2, r * 2 + 1, 1.into());
            m.set(r * 2 + 1, r * 2, 1.into());
        }
        m
    };
    let mut mats = Vec::with_capacity(12);
    for a in 0..3 {
        for b in 0..2 {
            for c in 0..2 {
                let mut m = IntMat::identity(6);
                for _ in 0..a {
                    m = cycle.mul(&m)?;
                }
                if b == 1 {
                    m = swap_cols.mul(&m)?;
                }
                m = m.scale(&sign(c).into());
                mats.push(m);
            }
        }
    }
    let rep = IntRep::new(group, mats)?;
    let idx = |a: usize, b: usize, c: usize| 4 * a + 2 * b + c;
    Ok(Example {
        name: "six-dim",
        description: "Z/3 + Z/2 + Z/2 acting on 3x2 integer matrices",
        group: VirtAbGroup::new_split(rep)?,
        elements: vec![
            ("e", 0),
            ("g1", idx(1, 0, 0)),
            ("g2", idx(0, 1, 0)),
            ("g3", idx(0, 0, 1)),
            ("g1g3", idx(1, 0, 1)),
            ("g2g3", idx(0, 1, 1)),
        ],
        witness: None,
    })
}

/// `(Z/2)^2` acting diagonally on `Z^3` by `diag((−1)^a, (−1)^b, (−1)^{a+b})`.
/// Element `(a, b)` has index `2a + b`.
pub fn diag3() -> Result<Example> {
    let mats = (0..4).map(|x| diag(&[sign(x / 2), sign(x % 2), sign(x / 2 + x % 2)])).collect();
    let rep = IntRep::new(klein(), mats)?;
    Ok(Example {
        name: "diag3",
        description: "(Z/2)^2 acting diagonally on Z^3",
        group: VirtAbGroup::new_split(rep)?,
        elements: vec![("00", 0), ("01", 1), ("10", 2), ("11", 3)],
        witness: Some(Tuple::from_i64(0, &[1, 1, 1], &[-1, -1, -1], &[0, 0, 0], &[0, 0, 0])),
    })
}

/// Two copies of the infinite dihedral group: `(Z/2)^2` acting on `Z^2` by
/// `diag((−1)^a, (−1)^b)`.
pub fn h0h0() -> Result<Example> {
    let mats = (0..4).map(|x| diag(&[sign(x / 2), sign(x % 2)])).collect();
    let rep = IntRep::new(klein(), mats)?;
    Ok(Example {
        name: "h0h0",
        description: "(Z/2)^2 acting on Z^2 by independent sign changes",
        group: VirtAbGroup::new_split(rep)?,
        elements: vec![("00", 0), ("01", 1), ("10", 2), ("11", 3)],
        witness: Some(Tuple::from_i64(0, &[1, 0], &[0, 0], &[0, 0], &[0, 0])),
    })
}

pub fn by_name(name: &str) -> Result<Example> {
    match name {
        "swap" => swap(),
        "rot4" => rot4(),
        "dihedral-line" => dihedral_line(),
        "six-dim" => six_dim(),
        "diag3" => diag3(),
        "h0h0" => h0h0(),
        _ => Err(Error::InvalidInput(format!("unknown example '{name}'; known: {}", NAMES.join(", ")))),
    }
}

pub fn all() -> Result<Vec<Example>> {
    NAMES.iter().map(|n| by_name(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{index, Index, Lattice};
    use num_bigint::BigInt;

    #[test]
    fn all_examples_build() {
        for ex in all().unwrap() {
            ex.group.rep().validate().unwrap();
            let hull = ex.group.hull().unwrap();
            assert!(hull.sandwich_holds(ex.group.rep()).unwrap(), "{}", ex.name);
        }
        assert!(by_name("nope").is_err());
    }

    #[test]
    fn six_dim_w_lattice() {
        let ex = six_dim().unwrap();
        let g = ex.element("g1g3").unwrap();
        let rep = ex.group.rep();
        let w = rep.w_lattice(g);
        assert_eq!(index(&w, &Lattice::full(6)).unwrap(), Index::Finite(BigInt::from(4)));
        assert_eq!(rep.v_lattice(g), Lattice::full(6));
        // the six generators listed for W_g: E11+E21, E21+E31, E11+E31 and the column-2 analogues
        let e = |r: usize, c: usize| crate::matrix::unit_vec(6, r * 2 + c);
        let add = |a: Vec<BigInt>, b: Vec<BigInt>| crate::matrix::vec_add(&a, &b);
        let listed = vec![
            add(e(0, 0), e(1, 0)),
            add(e(1, 0), e(2, 0)),
            add(e(0, 0), e(2, 0)),
            add(e(0, 1), e(1, 1)),
            add(e(1, 1), e(2, 1)),
            add(e(0, 1), e(2, 1)),
        ];
        assert_eq!(Lattice::from_generators(&listed, 6).unwrap(), w);
    }
}
