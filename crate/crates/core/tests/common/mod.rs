//! Brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use vab_core::matrix::IntMat;
use vab_core::vab::{Element, VirtAbGroup};

pub mod lattice_suite;
pub mod rep_suite;

pub type V = Vec<i64>;

pub fn to_i64(v: &[BigInt]) -> V {
    v.iter().map(|x| x.to_i64().expect("small test vector")).collect()
}

pub fn mat_i64(m: &IntMat) -> Vec<V> {
    m.to_i64_rows().expect("small matrix")
}

pub fn apply(m: &[V], v: &[i64]) -> V {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Lattice points of `span(gens)` inside the box `[-r, r]^n`, by breadth-first
/// search inside a box large enough for every point of the smaller box to be
/// reached by a path of generator steps.
pub fn box_points(gens: &[V], n: usize, r: i64) -> HashSet<V> {
    let m = gens.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
    let outer = r + (n as i64 + 1) * m;
    let zero = vec![0i64; n];
    let mut seen = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            for s in [1i64, -1] {
                let y: V = x.iter().zip(g).map(|(a, b)| a + s * b).collect();
                if y.iter().all(|c| c.abs() <= outer) && seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen.into_iter().filter(|p| p.iter().all(|c| c.abs() <= r)).collect()
}

/// Every vector of `[-r, r]^n`.
pub fn cube(n: usize, r: i64) -> Vec<V> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: V| (-r..=r).map(move |x| {
                let mut q = p.clone();
                q.push(x);
                q
            }))
            .collect();
    }
    out
}

/// Exhaustive conjugator search over a ball: `y = a·x·a⁻¹` for some `a` of
/// norm at most the ball radius. Conjugators are grouped by their G-part `k`;
/// `a = (u, k)` sends `(v, g)` to `(ρ(k)v + (1 − ρ(kgk⁻¹))u, kgk⁻¹)`.
pub struct ConjugatorOracle {
    order: usize,
    conj: Vec<Vec<usize>>,
    mats: Vec<Vec<V>>,
    /// `(k, g') -> {(1 − ρ(g'))u : (u, k) in the ball}`.
    shifts: HashMap<(usize, usize), HashSet<V>>,
}

impl ConjugatorOracle {
    pub fn new(group: &VirtAbGroup, radius: usize, cap: usize) -> Self {
        let g = group.rep().group();
        let order = g.order();
        let conj: Vec<Vec<usize>> = (0..order).map(|k| (0..order).map(|x| g.conj(k, x)).collect()).collect();
        let mats: Vec<Vec<V>> = (0..order).map(|x| mat_i64(group.rep().mat(x))).collect();
        let ball = group.ball(radius, cap).expect("ball fits");
        let mut by_k: Vec<Vec<V>> = vec![Vec::new(); order];
        for (a, _) in &ball {
            by_k[a.g].push(to_i64(&a.v));
        }
        let mut shifts = HashMap::new();
        for k in 0..order {
            for gp in 0..order {
                let set: HashSet<V> = by_k[k]
                    .iter()
                    .map(|u| {
                        let ru = apply(&mats[gp], u);
                        u.iter().zip(&ru).map(|(a, b)| a - b).collect()
                    })
                    .collect();
                shifts.insert((k, gp), set);
            }
        }
        ConjugatorOracle { order, conj, mats, shifts }
    }

    pub fn conjugate(&self, x: &Element, y: &Element) -> bool {
        let v = to_i64(&x.v);
        let w = to_i64(&y.v);
        (0..self.order).any(|k| {
            if self.conj[k][x.g] != y.g {
                return false;
            }
            let rv = apply(&self.mats[k], &v);
            let d: V = w.iter().zip(&rv).map(|(a, b)| a - b).collect();
            self.shifts[&(k, y.g)].contains(&d)
        })
    }
}

pub struct OracleRun {
    pub pairs: usize,
    /// Pairs of distinct conjugate elements.
    pub conjugate_pairs: usize,
    pub disagreements: Vec<String>,
}

/// Compares `is_conjugate` with the oracle over unordered pairs of `ball(radius)`.
pub fn conjugacy_disagreements(group: &VirtAbGroup, radius: usize, oracle_radius: usize) -> OracleRun {
    let ball = group.ball(radius, 1_000_000).expect("ball fits");
    let oracle = ConjugatorOracle::new(group, oracle_radius, 5_000_000);
    let mut bad = Vec::new();
    let mut pairs = 0;
    let mut conjugate_pairs = 0;
    for j in 0..ball.len() {
        for i in 0..=j {
            let (x, y) = (&ball[i].0, &ball[j].0);
            pairs += 1;
            let fast = group.is_conjugate(x, y).expect("members");
            let slow = oracle.conjugate(x, y);
            if slow && i != j {
                conjugate_pairs += 1;
            }
            if fast.conjugate != slow {
                bad.push(format!("{x:?} vs {y:?}: decision {} oracle {}", fast.conjugate, slow));
            } else if let Some(a) = &fast.witness {
                if &group.conj(a, x).expect("members") != y {
                    bad.push(format!("{x:?} vs {y:?}: witness {a:?} fails"));
                }
            }
        }
    }
    OracleRun { pairs, conjugate_pairs, disagreements: bad }
}
