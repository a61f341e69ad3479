//! Representation and hull checks over every built-in example.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use vab_core::examples;
use vab_core::lattice::Lattice;
use vab_core::matrix::{unit_vec, IntMat};

fn all() -> Vec<examples::Example> {
    examples::all().unwrap()
}

pub fn projectors_orthogonal_and_scalar() {
    for ex in all() {
        let rep = ex.group.rep();
        let hull = ex.group.hull().unwrap();
        let order = BigInt::from(rep.group().order());
        let h = rep.dim();
        let mut total = IntMat::zeros(h, h);
        for (i, a) in hull.components.iter().enumerate() {
            assert_eq!(a.projector.mul(&a.projector).unwrap(), a.projector.scale(&order), "{}", ex.name);
            total = total.add(&a.projector).unwrap();
            for (j, b) in hull.components.iter().enumerate() {
                if i != j {
                    assert!(a.projector.mul(&b.projector).unwrap().is_zero(), "{}", ex.name);
                }
            }
            // the orbit character map acts on its component by a scalar c dividing |G|^2
            let c = a.orbit_char.scalar.clone().unwrap();
            assert!((&order * &order).is_multiple_of(&c), "{}", ex.name);
            let basis = a.lattice.num.basis_rows();
            assert!(a.orbit_char.acts_as_scalar_on(&basis, &c).unwrap(), "{}", ex.name);
            for b in hull.components.iter().filter(|b| b.index != a.index) {
                let other = b.lattice.num.basis_rows();
                assert!(a.orbit_char.acts_as_scalar_on(&other, &BigInt::zero()).unwrap(), "{}", ex.name);
            }
        }
        assert_eq!(total, IntMat::scalar(h, &order), "{}", ex.name);
    }
}

pub fn sandwich() {
    for ex in all() {
        let rep = ex.group.rep();
        let hull = ex.group.hull().unwrap();
        let sum = hull.direct_sum(rep.dim()).unwrap();
        let order = BigInt::from(rep.group().order());
        // M ⊆ M'
        for j in 0..rep.dim() {
            assert!(sum.member_scaled(&unit_vec(rep.dim(), j), &BigInt::from(1)).unwrap(), "{}", ex.name);
        }
        // |G|M' ⊆ M
        for row in sum.num.basis_rows() {
            assert!(row.iter().all(|x| (x * &order).is_multiple_of(&sum.den)), "{}", ex.name);
        }
    }
}

pub fn central_elements_and_components() {
    for ex in all() {
        let rep = ex.group.rep();
        let g = rep.group();
        let hull = ex.group.hull().unwrap();
        let order = BigInt::from(g.order());
        for c in g.center() {
            let mut fixed_parts = Vec::new();
            for comp in &hull.components {
                let r = comp.rank();
                let (w, _) = comp.w_v(c);
                if comp.acts_trivially(c) {
                    fixed_parts.push(comp);
                } else {
                    assert!(w.contains(&Lattice::scaled_full(r, &order)).unwrap(), "{} g={c}", ex.name);
                }
            }
            // V_g is the part of Z^h projecting to zero on the components fixed by g
            let mut expected = Lattice::full(rep.dim());
            for comp in fixed_parts {
                expected = expected.intersect(&Lattice::kernel(&comp.coords)).unwrap();
            }
            assert_eq!(rep.v_lattice(c), expected, "{} g={c}", ex.name);
        }
    }
}

pub fn w_meets_scaled_lattice_radically() {
    for ex in all() {
        let rep = ex.group.rep();
        let order = BigInt::from(rep.group().order());
        let sq = Lattice::scaled_full(rep.dim(), &(&order * &order));
        for g in rep.group().elements() {
            let w = rep.w_lattice(g);
            let v = w.radical();
            assert_eq!(w.intersect(&sq).unwrap(), v.intersect(&sq).unwrap(), "{} g={g}", ex.name);
            assert!(w.contains(&v.scale(&order)).unwrap(), "{} g={g}", ex.name);
        }
    }
}

pub fn hull_is_deterministic() {
    for ex in all() {
        let a = ex.group.hull().unwrap();
        let b = vab_core::hull::square_hull(ex.group.rep()).unwrap();
        assert_eq!(a.prime, b.prime);
        for (x, y) in a.components.iter().zip(&b.components) {
            assert_eq!(x.lattice, y.lattice);
        }
    }
}
