//! Reduction of integral representations modulo a splitting prime and their
//! decomposition into constituents with trace characters.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rep::IntRep;

/// Default upper bound for the prime search.
pub const PRIME_SEARCH_BOUND: u64 = 1 << 24;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Least prime `p ≡ a (mod m)` with `p ∤ avoid` and `p ≥ min_size`, not exceeding `bound`.
pub fn find_prime(a: u64, m: u64, avoid: u64, min_size: u64, bound: u64) -> Result<u64> {
    if m == 0 || a.gcd(&m) != 1 {
        return Err(Error::InvalidInput(format!("residue {a} is not a unit modulo {m}")));
    }
    if avoid == 0 {
        return Err(Error::InvalidInput("avoid must be nonzero".into()));
    }
    let start = min_size.max(2);
    // first p >= start with p ≡ a mod m
    let mut p = start + (a % m + m - start % m) % m;
    while p <= bound {
        if is_prime(p) && !avoid.is_multiple_of(p) {
            return Ok(p);
        }
        p += m;
    }
    Err(Error::PrimeSearchBound(bound))
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

/// Symmetric lift of a residue into `(-p/2, p/2)`.
pub fn lift(x: u64, p: u64) -> i64 {
    let x = x % p;
    if x > p / 2 {
        x as i64 - p as i64
    } else {
        x as i64
    }
}

type FpMat = Vec<Vec<u64>>;

/// A representation over `Z/p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPRep {
    pub p: u64,
    pub dim: usize,
    pub mats: Vec<FpMat>,
}

/// An irreducible constituent: dimension, multiplicity and trace character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent {
    pub dim: usize,
    pub multiplicity: usize,
    pub character: Vec<u64>,
}

/// A Galois orbit of constituent characters and its lifted sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisOrbit {
    /// Sum over the orbit's distinct characters, lifted to the integers.
    pub values: Vec<i64>,
    /// Common dimension of the members.
    pub dim: usize,
    /// Indices into the constituent list.
    pub members: Vec<usize>,
}

pub fn reduce(rep: &IntRep, p: u64) -> Result<ModPRep> {
    if (rep.group().order() as u64).is_multiple_of(p) {
        return Err(Error::PrimeDividesOrder(p));
    }
    let pb = num_bigint::BigInt::from(p);
    let mats = rep
        .mats()
        .iter()
        .map(|m| {
            m.rows_iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.mod_floor(&pb).to_u64().expect("residue fits"))
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(ModPRep { p, dim: rep.dim(), mats })
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(a: &mut FpMat, p: u64) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| a[k][c] != 0) else {
            continue;
        };
        a.swap(r, k);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    pivots
}

/// Basis of `{x : a·x = 0}` over `Z/p`, where `a` has `cols` columns.
fn nullspace(a: &FpMat, cols: usize, p: u64) -> FpMat {
    let mut m = a.clone();
    let pivots = rref(&mut m, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; cols];
            v[f] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

fn mat_vec(a: &FpMat, v: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|r| r.iter().zip(v).fold(0, |acc, (x, y)| (acc + x * y) % p)).collect()
}

/// Decomposes the representation into constituents. Isotypic parts are the
/// joint eigenspaces of the class-sum operators; multiplicities follow from
/// the norm of the restricted trace.
pub fn split(mrep: &ModPRep, group: &FiniteGroup) -> Result<Vec<Constituent>> {
    let p = mrep.p;
    let n = mrep.dim;
    let order = group.order() as u64;
    if order.is_multiple_of(p) {
        return Err(Error::PrimeDividesOrder(p));
    }
    let identity: FpMat = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
    let mut parts: Vec<FpMat> = if n == 0 { vec![] } else { vec![identity] };
    for class in group.conjugacy_classes().iter().skip(1) {
        let mut s = vec![vec![0u64; n]; n];
        for &g in class {
            for i in 0..n {
                for j in 0..n {
                    s[i][j] = (s[i][j] + mrep.mats[g][i][j]) % p;
                }
            }
        }
        let mut refined = Vec::new();
        for u in &parts {
            let k = u.len();
            // columns S·u_j and u_j
            let su: Vec<Vec<u64>> = u.iter().map(|row| mat_vec(&s, row, p)).collect();
            let mut found = 0;
            for lambda in 0..p {
                let a: FpMat = (0..n)
                    .map(|i| (0..k).map(|j| (su[j][i] + p - lambda * u[j][i] % p) % p).collect())
                    .collect();
                let ker = nullspace(&a, k, p);
                if ker.is_empty() {
                    continue;
                }
                let mut basis: FpMat = ker
                    .iter()
                    .map(|c| {
                        (0..n).map(|t| (0..k).fold(0, |acc, j| (acc + c[j] * u[j][t]) % p)).collect()
                    })
                    .collect();
                rref(&mut basis, p);
                found += basis.len();
                refined.push(basis);
                if found == k {
                    break;
                }
            }
            if found != k {
                return Err(Error::NonSplittingPrime(p));
            }
        }
        parts = refined;
    }
    let inv_order = inv_mod(order, p);
    let mut out = Vec::new();
    for mut u in parts {
        let pivots = rref(&mut u, p);
        let k = u.len();
        let traces: Vec<u64> = group
            .elements()
            .map(|g| {
                u.iter()
                    .zip(&pivots)
                    .fold(0, |acc, (row, &c)| (acc + mat_vec(&mrep.mats[g], row, p)[c]) % p)
            })
            .collect();
        let norm = group.elements().fold(0, |acc, g| (acc + traces[g] * traces[group.inv(g)]) % p);
        let m_sq = norm * inv_order % p;
        let m = (1..=k)
            .find(|&m| k % m == 0 && (m as u64 * m as u64) % p == m_sq)
            .ok_or(Error::NonSplittingPrime(p))?;
        let inv_m = inv_mod(m as u64, p);
        let character: Vec<u64> = traces.iter().map(|t| t * inv_m % p).collect();
        out.push(Constituent { dim: k / m, multiplicity: m, character });
    }
    out.sort_by(|a, b| a.character.cmp(&b.character));
    Ok(out)
}

/// Groups constituent characters into orbits of the power maps
/// `χ ↦ (g ↦ χ(g^k))`, `gcd(k, exp G) = 1`, and lifts each orbit sum.
pub fn galois_orbit_sums(constituents: &[Constituent], group: &FiniteGroup, p: u64) -> Result<Vec<GaloisOrbit>> {
    let exp = group.exponent();
    let powers: Vec<u64> = (1..=exp).filter(|k| k.gcd(&exp) == 1).collect();
    let index: BTreeMap<&Vec<u64>, usize> =
        constituents.iter().enumerate().map(|(i, c)| (&c.character, i)).collect();
    let mut assigned = vec![false; constituents.len()];
    let mut out = Vec::new();
    for i in 0..constituents.len() {
        if assigned[i] {
            continue;
        }
        let base = &constituents[i];
        let mut members = Vec::new();
        for &k in &powers {
            let chi: Vec<u64> = group.elements().map(|g| base.character[group.pow(g, k)]).collect();
            let j = *index.get(&chi).ok_or(Error::NonSplittingPrime(p))?;
            if !members.contains(&j) {
                members.push(j);
            }
        }
        members.sort_unstable();
        for &j in &members {
            assigned[j] = true;
            if constituents[j].dim != base.dim || constituents[j].multiplicity != base.multiplicity {
                return Err(Error::NonSplittingPrime(p));
            }
        }
        let bound = (members.len() * base.dim) as i64;
        let values: Vec<i64> = group
            .elements()
            .map(|g| {
                let s = members.iter().fold(0, |acc, &j| (acc + constituents[j].character[g]) % p);
                lift(s, p)
            })
            .collect();
        if values.iter().any(|v| v.abs() > bound) {
            return Err(Error::LiftOutOfRange(p));
        }
        out.push(GaloisOrbit { values, dim: base.dim, members });
    }
    out.sort_by(|a, b| a.values.cmp(&b.values));
    Ok(out)
}

/// Smallest prime admissible for splitting and exact lifting.
pub fn splitting_prime(rep: &IntRep) -> Result<u64> {
    let g = rep.group();
    let order = g.order() as u64;
    let h = rep.dim() as u64;
    let min = (2 * h * order).max(h * h) + 1;
    find_prime(1, g.exponent(), order, min, PRIME_SEARCH_BOUND)
}
