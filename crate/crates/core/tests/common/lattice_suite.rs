//! Deterministic lattice checks over small boxes.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::ops::ControlFlow;

use num_bigint::BigInt;
use vab_core::lattice::{for_each_hnf_shape, index, Index, Lattice};
use vab_core::matrix::{ivec, IntVec};

use super::{box_points, cube, V};

pub fn lattice(gens: &[V], n: usize) -> Lattice {
    let g: Vec<IntVec> = gens.iter().map(|v| ivec(v)).collect();
    Lattice::from_generators(&g, n).unwrap()
}

pub fn check_membership(gens: &[V], n: usize) -> Result<(), String> {
    let l = lattice(gens, n);
    let oracle = box_points(gens, n, 3);
    for p in cube(n, 3) {
        let fast = l.member(&ivec(&p)).unwrap();
        if fast != oracle.contains(&p) {
            return Err(format!("gens {gens:?}: point {p:?} member={fast}"));
        }
    }
    Ok(())
}

pub fn membership_exhaustive_small() {
    // every single generator in dimensions 1..3 and every pair in dimension 2
    for n in 1..=3 {
        for g in cube(n, 3) {
            check_membership(&[g], n).unwrap();
        }
    }
    let vs = cube(2, 3);
    for a in &vs {
        for b in &vs {
            check_membership(&[a.clone(), b.clone()], 2).unwrap();
        }
    }
}

/// Echelon shape, normal form of the basis, and radical idempotence for
/// every lattice spanned by one or two vectors of `[-3, 3]^2` and one vector
/// of `[-3, 3]^3`.
pub fn hnf_and_radical_exhaustive() {
    let mut families: Vec<(Vec<V>, usize)> = Vec::new();
    let vs = cube(2, 3);
    for a in &vs {
        for b in &vs {
            families.push((vec![a.clone(), b.clone()], 2));
        }
    }
    families.extend(cube(3, 3).into_iter().map(|g| (vec![g], 3)));
    for (gens, n) in families {
        let l = lattice(&gens, n);
        let again = Lattice::from_generators(&l.basis_rows(), n).unwrap();
        assert_eq!(again.basis(), l.basis(), "{gens:?}");
        let rev: Vec<V> = gens.iter().rev().cloned().collect();
        assert_eq!(lattice(&rev, n).basis(), l.basis(), "{gens:?}");
        for (i, &p) in l.pivots().iter().enumerate() {
            let piv = l.basis().get(i, p).clone();
            assert!(piv > BigInt::from(0), "{gens:?}");
            for r in 0..i {
                let e = l.basis().get(r, p).clone();
                assert!(e >= BigInt::from(0) && e < piv, "{gens:?}");
            }
        }
        let r = l.radical();
        assert_eq!(r.radical(), r, "{gens:?}");
        assert!(r.contains(&l).unwrap() && r.rank() == l.rank(), "{gens:?}");
    }
}

/// Subgroups of `(Z/k)^2` of order `k`, i.e. sublattices of `Z^2` of index
/// `k` containing `kZ^2`, found by closing every pair of residues.
fn brute_sublattices(k: i64) -> usize {
    let res: Vec<(i64, i64)> = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).collect();
    let mut found: HashSet<BTreeSet<(i64, i64)>> = HashSet::new();
    for &a in &res {
        for &b in &res {
            let mut seen = BTreeSet::from([(0, 0)]);
            let mut queue = VecDeque::from([(0, 0)]);
            while let Some((x, y)) = queue.pop_front() {
                for (gx, gy) in [a, b] {
                    let z = ((x + gx) % k, (y + gy) % k);
                    if seen.insert(z) {
                        queue.push_back(z);
                    }
                }
            }
            if seen.len() as i64 * k == k * k {
                found.insert(seen);
            }
        }
    }
    found.len()
}

pub fn sublattice_counts_of_z2() {
    let sigma = [1usize, 3, 4, 7, 6, 12];
    let mut counts = [0usize; 7];
    let _ = for_each_hnf_shape(2, 6, |k, _| {
        counts[k as usize] += 1;
        ControlFlow::Continue(())
    });
    let mut cumulative = 0;
    for k in 1..=6 {
        assert_eq!(counts[k], sigma[k - 1], "index {k}");
        assert_eq!(counts[k], brute_sublattices(k as i64), "index {k}");
        cumulative += counts[k];
    }
    assert_eq!(cumulative, 33);
    // each enumerated shape really has the stated index
    let _ = for_each_hnf_shape(2, 6, |k, c| {
        let l = lattice(&[c[0].clone(), c[1].clone()], 2);
        assert_eq!(index(&l, &Lattice::full(2)).unwrap(), Index::Finite(BigInt::from(k)));
        ControlFlow::Continue(())
    });
}
