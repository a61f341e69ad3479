//! Unsolvability predicates, admitting component sets and the exponent `𝔨₃`.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::hull::SquareHull;
use crate::lattice::Lattice;
use crate::matrix::{from_json_vec, ivec, to_json_vec, vec_add, vec_scale, vec_sub, IntMat, IntVec, JsonInt};
use crate::pattern::{min_hitting_weight, Coset, Region};
use crate::vab::VirtAbGroup;

/// `(g, v1, v2, k1, k2)`. For exponent use `(k_i, g) ∈ H`; `v_i` are arbitrary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tuple {
    pub g: GroupElement,
    pub v1: IntVec,
    pub v2: IntVec,
    pub k1: IntVec,
    pub k2: IntVec,
}

impl Tuple {
    pub fn from_i64(g: GroupElement, v1: &[i64], v2: &[i64], k1: &[i64], k2: &[i64]) -> Self {
        Tuple { g, v1: ivec(v1), v2: ivec(v2), k1: ivec(k1), k2: ivec(k2) }
    }

    /// Checks dimensions and that `(k1, g), (k2, g) ∈ H`.
    pub fn validate(&self, group: &VirtAbGroup) -> Result<()> {
        check_g(group, self.g)?;
        for v in [&self.v1, &self.v2, &self.k1, &self.k2] {
            check_vec(group, v)?;
        }
        let vg = group.v_of(self.g);
        for k in [&self.k1, &self.k2] {
            if vec_sub(k, vg).iter().any(|x| !x.is_multiple_of(group.order_big())) {
                return Err(Error::NonMember);
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TupleRepr {
    g: usize,
    v1: Vec<JsonInt>,
    v2: Vec<JsonInt>,
    k1: Vec<JsonInt>,
    k2: Vec<JsonInt>,
}

impl Serialize for Tuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TupleRepr {
            g: self.g,
            v1: to_json_vec(&self.v1),
            v2: to_json_vec(&self.v2),
            k1: to_json_vec(&self.k1),
            k2: to_json_vec(&self.k2),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TupleRepr::deserialize(d)?;
        Ok(Tuple {
            g: r.g,
            v1: from_json_vec(&r.v1),
            v2: from_json_vec(&r.v2),
            k1: from_json_vec(&r.k1),
            k2: from_json_vec(&r.k2),
        })
    }
}

/// A set of hull components, as a bitset over component indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComponentSet(pub u64);

impl ComponentSet {
    pub fn empty() -> Self {
        ComponentSet(0)
    }

    pub fn full(l: usize) -> Self {
        ComponentSet(if l >= 64 { u64::MAX } else { (1u64 << l) - 1 })
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        ComponentSet(idx.iter().fold(0, |acc, &i| acc | 1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        ComponentSet(self.0 | 1 << i)
    }

    pub fn is_subset(self, other: ComponentSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    /// `Σ_{i∈K} d_i`.
    pub fn dim(self, hull: &SquareHull) -> usize {
        self.indices().iter().map(|&i| hull.components[i].d).sum()
    }

    fn check(self, hull: &SquareHull) -> Result<()> {
        if !self.is_subset(ComponentSet::full(hull.len())) {
            return Err(Error::InvalidInput(format!("component set {:?} out of range", self.indices())));
        }
        Ok(())
    }
}

/// Classification of a pair in a cell `(i, h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cell {
    Vanishes,
    /// Not vanishing; used when no modulus is given.
    WeaklyUnsolvable,
    LocallyUnsolvable,
    GloballyUnsolvable,
}

impl Cell {
    pub fn is_weak(self) -> bool {
        self != Cell::Vanishes
    }

    pub fn symbol(self) -> char {
        match self {
            Cell::Vanishes => 'v',
            Cell::WeaklyUnsolvable => 'u',
            Cell::LocallyUnsolvable => 'l',
            Cell::GloballyUnsolvable => 'g',
        }
    }
}

/// Cells of a pair over `h ∈ C(g)` (rows) and components (columns).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternTable {
    pub g: GroupElement,
    pub modulus: Option<u32>,
    pub rows: Vec<GroupElement>,
    pub cells: Vec<Vec<Cell>>,
    /// Strong unsolvability of the same pair, per row.
    pub strong: Vec<bool>,
}

impl PatternTable {
    pub fn cell(&self, h: GroupElement, i: usize) -> Option<Cell> {
        let r = self.rows.iter().position(|&x| x == h)?;
        self.cells[r].get(i).copied()
    }

    /// Components where the pair is weakly unsolvable in row `r`.
    pub fn weak_set(&self, r: usize) -> ComponentSet {
        ComponentSet(
            self.cells[r].iter().enumerate().filter(|(_, c)| c.is_weak()).fold(0, |acc, (i, _)| acc | 1 << i),
        )
    }
}

impl fmt::Display for PatternTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.cells.first().map_or(0, Vec::len);
        write!(f, "h")?;
        for i in 1..=l {
            write!(f, "\t{i}")?;
        }
        writeln!(f, "\tstrong")?;
        for (r, h) in self.rows.iter().enumerate() {
            write!(f, "{h}")?;
            for c in &self.cells[r] {
                write!(f, "\t{}", c.symbol())?;
            }
            writeln!(f, "\t{}", if self.strong[r] { "yes" } else { "no" })?;
        }
        Ok(())
    }
}

fn check_g(group: &VirtAbGroup, g: GroupElement) -> Result<()> {
    if g >= group.group_order() {
        return Err(Error::InvalidInput(format!("group element {g} out of range")));
    }
    Ok(())
}

fn check_vec(group: &VirtAbGroup, v: &[BigInt]) -> Result<()> {
    if v.len() != group.dim() {
        return Err(Error::DimensionMismatch { expected: group.dim(), found: v.len() });
    }
    Ok(())
}

fn check_centralizer(group: &VirtAbGroup, g: GroupElement, h: GroupElement) -> Result<()> {
    check_g(group, g)?;
    check_g(group, h)?;
    if !group.rep().group().commutes(g, h) {
        return Err(Error::NotInCentralizer(h));
    }
    Ok(())
}

fn check_component(hull: &SquareHull, i: usize) -> Result<()> {
    if i >= hull.len() {
        return Err(Error::InvalidInput(format!("component {i} out of range (hull has {})", hull.len())));
    }
    Ok(())
}

/// Coordinates of `π_i(v1 − ρ(h)v2)` in `M_i`.
fn component_difference(group: &VirtAbGroup, i: usize, h: GroupElement, v1: &[BigInt], v2: &[BigInt]) -> Result<IntVec> {
    let hull = group.hull()?;
    check_component(hull, i)?;
    check_vec(group, v1)?;
    check_vec(group, v2)?;
    let diff = vec_sub(v1, &group.rep().act(h, v2));
    Ok(hull.components[i].project(&diff))
}

/// `π_i(v1 − ρ(h)v2) ∈ V_g(M_i)`.
pub fn vanishes(
    group: &VirtAbGroup,
    g: GroupElement,
    i: usize,
    h: GroupElement,
    v1: &[BigInt],
    v2: &[BigInt],
) -> Result<bool> {
    check_centralizer(group, g, h)?;
    let x = component_difference(group, i, h, v1, v2)?;
    let (_, v) = group.hull()?.component_w_v(i, g);
    v.member(&x)
}

/// Vanishes, `m`-locally unsolvable (`∉ |G|^m M_i + V_g(M_i)`) or `m`-globally
/// unsolvable.
#[allow(clippy::too_many_arguments)]
pub fn classify(
    group: &VirtAbGroup,
    g: GroupElement,
    i: usize,
    h: GroupElement,
    v1: &[BigInt],
    v2: &[BigInt],
    m: u32,
) -> Result<Cell> {
    if m == 0 {
        return Err(Error::InvalidInput("modulus exponent m must be at least 1".into()));
    }
    check_centralizer(group, g, h)?;
    let x = component_difference(group, i, h, v1, v2)?;
    let (_, v) = group.hull()?.component_w_v(i, g);
    classify_coords(group, &v, &x, m)
}

fn classify_coords(group: &VirtAbGroup, v: &Lattice, x: &[BigInt], m: u32) -> Result<Cell> {
    if v.member(x)? {
        return Ok(Cell::Vanishes);
    }
    let scale: BigInt = Pow::pow(group.order_big(), m);
    let local = v.sum(&Lattice::scaled_full(v.ambient(), &scale))?;
    Ok(if local.member(x)? { Cell::GloballyUnsolvable } else { Cell::LocallyUnsolvable })
}

/// `|G|W_g + |G|³Z^h`.
fn strong_lattice(group: &VirtAbGroup, g: GroupElement) -> Result<Lattice> {
    let cube: BigInt = Pow::pow(group.order_big(), 3u32);
    group.scaled_w(g).sum(&Lattice::scaled_full(group.dim(), &cube))
}

/// `k1 − ρ(h)k2 − v_h + ρ(g)v_h ∉ |G|W_g + |G|³Z^h`.
pub fn strongly_unsolvable(
    group: &VirtAbGroup,
    g: GroupElement,
    h: GroupElement,
    k1: &[BigInt],
    k2: &[BigInt],
) -> Result<bool> {
    check_centralizer(group, g, h)?;
    check_vec(group, k1)?;
    check_vec(group, k2)?;
    let t = group.conjugacy_target(g, h, k1, k2);
    Ok(!strong_lattice(group, g)?.member(&t)?)
}

/// All cells of `(v1, v2)` for `g`, with modulus `m` when given.
pub fn pattern_table(
    group: &VirtAbGroup,
    g: GroupElement,
    v1: &[BigInt],
    v2: &[BigInt],
    m: Option<u32>,
) -> Result<PatternTable> {
    check_g(group, g)?;
    check_vec(group, v1)?;
    check_vec(group, v2)?;
    if m == Some(0) {
        return Err(Error::InvalidInput("modulus exponent m must be at least 1".into()));
    }
    let hull = group.hull()?;
    let rows = group.rep().group().centralizer(g);
    let strong_l = strong_lattice(group, g)?;
    let vs: Vec<Lattice> = (0..hull.len()).map(|i| hull.component_w_v(i, g).1).collect();
    let mut cells = Vec::with_capacity(rows.len());
    let mut strong = Vec::with_capacity(rows.len());
    for &h in &rows {
        let diff = vec_sub(v1, &group.rep().act(h, v2));
        let mut row = Vec::with_capacity(hull.len());
        for (c, v) in hull.components.iter().zip(&vs) {
            let x = c.project(&diff);
            row.push(match m {
                Some(m) => classify_coords(group, v, &x, m)?,
                None if v.member(&x)? => Cell::Vanishes,
                None => Cell::WeaklyUnsolvable,
            });
        }
        cells.push(row);
        strong.push(!strong_l.member(&group.conjugacy_target(g, h, v1, v2))?);
    }
    Ok(PatternTable { g, modulus: m, rows, cells, strong })
}

/// `K` `g,m`-admits `(v1, v2)`: for every `h ∈ C(g)` the pair is strongly
/// unsolvable, or locally unsolvable somewhere, or globally unsolvable in `K`.
pub fn admits_m(
    group: &VirtAbGroup,
    k: ComponentSet,
    g: GroupElement,
    v1: &[BigInt],
    v2: &[BigInt],
    m: u32,
) -> Result<bool> {
    k.check(group.hull()?)?;
    let t = pattern_table(group, g, v1, v2, Some(m))?;
    Ok((0..t.rows.len()).all(|r| {
        t.strong[r]
            || t.cells[r].contains(&Cell::LocallyUnsolvable)
            || t.cells[r].iter().enumerate().any(|(i, &c)| c == Cell::GloballyUnsolvable && k.contains(i))
    }))
}

/// `K` `g`-admits `(v1, v2, k1, k2)`: for every `h ∈ C(g)`, `(k1, k2)` is
/// strongly unsolvable or weakly unsolvable somewhere, or `(v1, v2)` is weakly
/// unsolvable in some component of `K`.
pub fn admits(group: &VirtAbGroup, k: ComponentSet, tuple: &Tuple) -> Result<bool> {
    tuple.validate(group)?;
    k.check(group.hull()?)?;
    let tk = pattern_table(group, tuple.g, &tuple.k1, &tuple.k2, None)?;
    let tv = pattern_table(group, tuple.g, &tuple.v1, &tuple.v2, None)?;
    Ok((0..tk.rows.len()).all(|r| {
        tk.strong[r]
            || tk.cells[r].iter().any(|c| c.is_weak())
            || tv.cells[r].iter().enumerate().any(|(i, c)| c.is_weak() && k.contains(i))
    }))
}

/// For each row not settled by `(k1, k2)`, the components where `(v1, v2)` is
/// weakly unsolvable. `K` admits exactly when it meets every returned set.
fn admit_constraints(group: &VirtAbGroup, tuple: &Tuple) -> Result<Vec<u64>> {
    let tk = pattern_table(group, tuple.g, &tuple.k1, &tuple.k2, None)?;
    let tv = pattern_table(group, tuple.g, &tuple.v1, &tuple.v2, None)?;
    Ok((0..tk.rows.len())
        .filter(|&r| !(tk.strong[r] || tk.cells[r].iter().any(|c| c.is_weak())))
        .map(|r| tv.weak_set(r).0)
        .collect())
}

/// `min{dim K : K g-admits the tuple}`, or 0 when no `K` admits.
pub fn min_admitting_dim(group: &VirtAbGroup, tuple: &Tuple) -> Result<usize> {
    tuple.validate(group)?;
    let hull = group.hull()?;
    let sets = admit_constraints(group, tuple)?;
    Ok(min_hitting_weight(&hull.dims(), &sets).unwrap_or(0))
}

/// An admitting set of least dimension, if any.
pub fn min_admitting_set(group: &VirtAbGroup, tuple: &Tuple) -> Result<Option<ComponentSet>> {
    tuple.validate(group)?;
    let hull = group.hull()?;
    let sets = admit_constraints(group, tuple)?;
    let Some(best) = min_hitting_weight(&hull.dims(), &sets) else {
        return Ok(None);
    };
    let l = hull.len();
    Ok((0u64..1 << l)
        .map(ComponentSet)
        .find(|k| k.dim(hull) == best && sets.iter().all(|s| s & k.0 != 0)))
}

/// `Σ_i d_i`.
pub fn naive_upper_bound(group: &VirtAbGroup) -> Result<usize> {
    Ok(group.hull()?.naive_bound())
}

/// `[I | −ρ(h)]`, the map `(a, b) ↦ a − ρ(h)b`.
fn pair_map(group: &VirtAbGroup, h: GroupElement) -> IntMat {
    IntMat::identity(group.dim()).hstack(&group.rep().mat(h).neg()).expect("same height")
}

/// `{(a, b) : π_i(a − ρ(h)b) ∈ V_g(M_i)}`.
fn vanishing_pullback(group: &VirtAbGroup, g: GroupElement, i: usize, h: GroupElement) -> Result<Lattice> {
    let hull = group.hull()?;
    let map = hull.components[i].coords.mul(&pair_map(group, h))?;
    Lattice::preimage(&map, &hull.component_w_v(i, g).1)
}

/// Every realizable vanishing set `𝓗 ⊆ C(g)` of component `i`, with the joint
/// kernel `∩_{h∈𝓗} {(a, b) : π_i(a − ρ(h)b) ∈ V_g(M_i)}`.
pub fn solution_sets(group: &VirtAbGroup, g: GroupElement, i: usize) -> Result<Vec<(Vec<GroupElement>, Lattice)>> {
    check_g(group, g)?;
    check_component(group.hull()?, i)?;
    let cg = group.rep().group().centralizer(g);
    let pulls: Vec<Lattice> = cg.iter().map(|&h| vanishing_pullback(group, g, i, h)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut excluded: Vec<&Lattice> = Vec::new();
    solution_dfs(&cg, &pulls, 0, Lattice::full(2 * group.dim()), &mut chosen, &mut excluded, &mut out)?;
    Ok(out)
}

fn solution_dfs<'a>(
    cg: &[GroupElement],
    pulls: &'a [Lattice],
    pos: usize,
    kernel: Lattice,
    chosen: &mut Vec<GroupElement>,
    excluded: &mut Vec<&'a Lattice>,
    out: &mut Vec<(Vec<GroupElement>, Lattice)>,
) -> Result<()> {
    if pos == cg.len() {
        out.push((chosen.clone(), kernel));
        return Ok(());
    }
    let p = &pulls[pos];
    let narrowed = kernel.intersect(p)?;
    if !excluded.iter().any(|e| e.contains(&narrowed).unwrap_or(true)) {
        chosen.push(cg[pos]);
        solution_dfs(cg, pulls, pos + 1, narrowed, chosen, excluded, out)?;
        chosen.pop();
    }
    if !p.contains(&kernel)? {
        excluded.push(p);
        solution_dfs(cg, pulls, pos + 1, kernel, chosen, excluded, out)?;
        excluded.pop();
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentMode {
    Exact,
    WitnessLower,
    NaiveUpper,
}

/// Limits for the exact search.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Search nodes (region tests) allowed in total.
    pub budget: u64,
    /// Sup-norm bound for explicit representatives.
    pub height_cap: u32,
    /// Residue classes scanned per region test.
    pub residue_budget: u64,
    /// Candidate points tried per representative search.
    pub max_candidates: usize,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: 2_000_000, height_cap: 4, residue_budget: 1 << 20, max_candidates: 200_000, parallel: true }
    }
}

/// The maximum for one `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMax {
    pub g: GroupElement,
    pub k: usize,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentCertificate {
    pub k: usize,
    pub mode: ExponentMode,
    pub witness: Option<Tuple>,
    /// The admitting set of least dimension for the witness.
    pub witness_set: Option<Vec<usize>>,
    pub naive: usize,
    pub per_g: Vec<GroupMax>,
    /// False when the budget ran out; `k` is then only a lower bound.
    pub complete: bool,
    pub lower: usize,
    pub upper: usize,
    pub nodes: u64,
    pub diagnostics: Vec<String>,
}

/// The exponent `𝔨₃` in the requested mode. `tuples` feeds the witness mode.
pub fn k3_exponent(
    group: &VirtAbGroup,
    mode: ExponentMode,
    tuples: &[Tuple],
    opts: &SearchOptions,
) -> Result<ExponentCertificate> {
    let naive = naive_upper_bound(group)?;
    let mut cert = ExponentCertificate {
        k: naive,
        mode,
        witness: None,
        witness_set: None,
        naive,
        per_g: Vec::new(),
        complete: true,
        lower: 0,
        upper: naive,
        nodes: 0,
        diagnostics: Vec::new(),
    };
    match mode {
        ExponentMode::NaiveUpper => {
            cert.lower = 0;
        }
        ExponentMode::WitnessLower => {
            let mut best: Option<(usize, &Tuple)> = None;
            for t in tuples {
                let k = min_admitting_dim(group, t)?;
                if best.is_none_or(|(b, _)| k > b) {
                    best = Some((k, t));
                }
            }
            let (k, t) = best.ok_or_else(|| Error::InvalidInput("witness mode needs at least one tuple".into()))?;
            cert.k = k;
            cert.lower = k;
            cert.witness = Some(t.clone());
            cert.witness_set = min_admitting_set(group, t)?.map(ComponentSet::indices);
        }
        ExponentMode::Exact => exact(group, opts, &mut cert)?,
    }
    if cert.k > group.dim() || cert.k > naive || cert.lower > cert.k {
        return Err(Error::Internal(format!("exponent {} outside [{}, {}]", cert.k, cert.lower, naive)));
    }
    Ok(cert)
}

struct GResult {
    g: GroupElement,
    k: usize,
    witness: Option<Tuple>,
    complete: bool,
    diagnostics: Vec<String>,
}

fn exact(group: &VirtAbGroup, opts: &SearchOptions, cert: &mut ExponentCertificate) -> Result<()> {
    let n = group.group_order();
    let nodes = AtomicU64::new(0);
    let run = |g: GroupElement| exact_for_g(group, g, opts, &nodes);
    #[cfg(feature = "parallel")]
    let results: Vec<Result<GResult>> = if opts.parallel {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(run).collect()
    } else {
        (0..n).map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<GResult>> = (0..n).map(run).collect();
    let mut best: Option<GResult> = None;
    let mut complete = true;
    for r in results {
        let r = r?;
        complete &= r.complete;
        cert.diagnostics.extend(r.diagnostics.iter().cloned());
        cert.per_g.push(GroupMax { g: r.g, k: r.k, complete: r.complete });
        if best.as_ref().is_none_or(|b| r.k > b.k) {
            best = Some(r);
        }
    }
    let best = best.ok_or_else(|| Error::Internal("empty group".into()))?;
    cert.k = best.k;
    cert.lower = best.k;
    cert.upper = if complete { best.k } else { cert.naive };
    cert.complete = complete;
    cert.nodes = nodes.load(Ordering::Relaxed);
    if let Some(t) = &best.witness {
        let check = min_admitting_dim(group, t)?;
        if check != best.k {
            return Err(Error::Internal(format!("witness evaluates to {check}, search found {}", best.k)));
        }
        cert.witness_set = min_admitting_set(group, t)?.map(ComponentSet::indices);
    }
    cert.witness = best.witness;
    Ok(())
}

/// Data for one `g` of the exact search.
struct Search<'a> {
    group: &'a VirtAbGroup,
    g: GroupElement,
    opts: &'a SearchOptions,
    nodes: &'a AtomicU64,
    cg: Vec<GroupElement>,
    /// Cosets of `(w1, w2)` with `k_i = v_g + |G|w_i` for which row `h` is
    /// neither strongly nor weakly unsolvable.
    settled: Vec<Coset>,
    /// `pullbacks[r][i]`: pairs vanishing in `(i, cg[r])`.
    pullbacks: Vec<Vec<Lattice>>,
    dims: Vec<usize>,
    naive: usize,
    exhausted: bool,
    diagnostics: Vec<String>,
    memo: HashMap<u64, Option<(usize, Vec<u64>)>>,
}

/// Best value and its weak-set pattern (per row of `R`, a component mask).
type VBest = Option<(usize, Vec<u64>)>;

impl<'a> Search<'a> {
    fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.opts.budget {
            self.exhausted = true;
            return false;
        }
        true
    }

    fn rows_of(&self, mask: u64) -> Vec<usize> {
        (0..self.cg.len()).filter(|r| mask >> r & 1 == 1).collect()
    }

    /// Best value over realizable weak patterns of `(v1, v2)` on the rows of `mask`.
    fn v_side(&mut self, mask: u64) -> Result<VBest> {
        if let Some(v) = self.memo.get(&mask) {
            return Ok(v.clone());
        }
        let rows = self.rows_of(mask);
        let cells: Vec<(usize, usize)> = rows.iter().flat_map(|&r| (0..self.dims.len()).map(move |i| (r, i))).collect();
        let mut best: VBest = None;
        let mut sets = vec![0u64; rows.len()];
        let mut excluded: Vec<Lattice> = Vec::new();
        let kernel = Lattice::full(2 * self.group.dim());
        self.v_dfs(&cells, &rows, 0, kernel, &mut excluded, &mut sets, &mut best)?;
        self.memo.insert(mask, best.clone());
        Ok(best)
    }

    #[allow(clippy::too_many_arguments)]
    fn v_dfs(
        &mut self,
        cells: &[(usize, usize)],
        rows: &[usize],
        pos: usize,
        kernel: Lattice,
        excluded: &mut Vec<Lattice>,
        sets: &mut Vec<u64>,
        best: &mut VBest,
    ) -> Result<()> {
        if best.as_ref().is_some_and(|b| b.0 == self.naive) || !self.tick() {
            return Ok(());
        }
        let l = self.dims.len();
        // a finished row without weak components forces the value 0
        if pos > 0 && pos.is_multiple_of(l) && sets[pos / l - 1] == 0 {
            return Ok(());
        }
        if pos == cells.len() {
            let value = min_hitting_weight(&self.dims, sets).unwrap_or(0);
            if best.as_ref().is_none_or(|b| value > b.0) {
                *best = Some((value, sets.clone()));
            }
            return Ok(());
        }
        let (r, i) = cells[pos];
        let ri = rows.iter().position(|&x| x == r).expect("row present");
        let p = self.pullbacks[r][i].clone();
        let narrowed = kernel.intersect(&p)?;
        let mut ok = true;
        for e in excluded.iter() {
            if e.contains(&narrowed)? {
                ok = false;
                break;
            }
        }
        if ok {
            self.v_dfs(cells, rows, pos + 1, narrowed, excluded, sets, best)?;
        }
        if !p.contains(&kernel)? {
            excluded.push(p);
            sets[ri] |= 1 << i;
            self.v_dfs(cells, rows, pos + 1, kernel, excluded, sets, best)?;
            sets[ri] &= !(1 << i);
            excluded.pop();
        }
        Ok(())
    }

    /// An explicit `(v1, v2)` with the given weak pattern on the rows of `mask`.
    fn v_point(&self, mask: u64, sets: &[u64]) -> Result<Option<IntVec>> {
        let rows = self.rows_of(mask);
        let mut kernel = Lattice::full(2 * self.group.dim());
        let mut holes = Vec::new();
        for (ri, &r) in rows.iter().enumerate() {
            for i in 0..self.dims.len() {
                if sets[ri] >> i & 1 == 1 {
                    holes.push(self.pullbacks[r][i].clone());
                } else {
                    kernel = kernel.intersect(&self.pullbacks[r][i])?;
                }
            }
        }
        let zero = vec![BigInt::zero(); 2 * self.group.dim()];
        let mut region = Region::new(Coset::new(zero.clone(), kernel)?);
        for h in holes {
            region = region.exclude(&Coset::new(zero.clone(), h)?)?;
        }
        region.find_point(self.opts.height_cap, self.opts.residue_budget, self.opts.max_candidates)
    }

    fn k_dfs(&mut self, pos: usize, region: Region, mask: u64, best: &mut Option<(usize, u64, Region)>) -> Result<()> {
        if best.as_ref().is_some_and(|b| b.0 == self.naive) || !self.tick() {
            return Ok(());
        }
        if !region.is_nonempty(self.opts.residue_budget)? {
            return Ok(());
        }
        if pos == self.cg.len() {
            if region.find_point(self.opts.height_cap, self.opts.residue_budget, self.opts.max_candidates)?.is_none() {
                self.diagnostics.push(format!(
                    "g={}: settled rows {:?} realizable but no representative of height <= {}",
                    self.g,
                    self.rows_of(mask).iter().map(|&r| self.cg[r]).collect::<Vec<_>>(),
                    self.opts.height_cap
                ));
            }
            // with no unsettled row the empty set admits
            let value = if mask == 0 { 0 } else { self.v_side(mask)?.map_or(0, |b| b.0) };
            if best.as_ref().is_none_or(|b| value > b.0) {
                *best = Some((value, mask, region));
            }
            return Ok(());
        }
        let c = self.settled[pos].clone();
        if let Some(inside) = region.restrict(&c)? {
            self.k_dfs(pos + 1, inside, mask | 1 << pos, best)?;
        }
        if !c.contains(&region.base)? {
            let outside = region.exclude(&c)?;
            self.k_dfs(pos + 1, outside, mask, best)?;
        }
        Ok(())
    }
}

fn exact_for_g(group: &VirtAbGroup, g: GroupElement, opts: &SearchOptions, nodes: &AtomicU64) -> Result<GResult> {
    let hull = group.hull()?;
    let h = group.dim();
    let order = group.order_big().clone();
    let rep = group.rep();
    let cg = rep.group().centralizer(g);
    if cg.len() > 63 || hull.len() > 63 {
        return Err(Error::InvalidInput("centralizer or hull too large for the exact search".into()));
    }
    // rows settled by k: t_h ∈ V_g ∩ (|G|W_g + |G|³Z^h) = |G|·L'
    let v = rep.v_lattice(g);
    let star = v.intersect(&strong_lattice(group, g)?)?;
    let reduced: Vec<IntVec> = star
        .basis()
        .rows_iter()
        .map(|r| r.iter().map(|x| x.div_floor(&order)).collect())
        .collect();
    if star.basis().rows_iter().flatten().any(|x| !x.is_multiple_of(&order)) {
        return Err(Error::Internal("settling lattice not inside |G|Z^h".into()));
    }
    let lprime = Lattice::from_generators(&reduced, h)?;
    let vg = group.v_of(g);
    let mut settled = Vec::with_capacity(cg.len());
    for &x in &cg {
        // t_h for w = 0, divided by |G|
        let t = group.conjugacy_target(g, x, vg, vg);
        if t.iter().any(|a| !a.is_multiple_of(&order)) {
            return Err(Error::Internal("conjugacy target not inside |G|Z^h".into()));
        }
        let c: IntVec = t.iter().map(|a| a.div_floor(&order)).collect();
        let p = Lattice::preimage(&pair_map(group, x), &lprime)?;
        let mut offset: IntVec = c.iter().map(|a| -a).collect();
        offset.extend(std::iter::repeat_n(BigInt::zero(), h));
        settled.push(Coset::new(offset, p)?);
    }
    let pullbacks = (0..cg.len())
        .map(|r| (0..hull.len()).map(|i| vanishing_pullback(group, g, i, cg[r])).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut s = Search {
        group,
        g,
        opts,
        nodes,
        cg,
        settled,
        pullbacks,
        dims: hull.dims(),
        naive: hull.naive_bound(),
        exhausted: false,
        diagnostics: Vec::new(),
        memo: HashMap::new(),
    };
    let mut best = None;
    s.k_dfs(0, Region::new(Coset::full(2 * h)), 0, &mut best)?;
    let complete = !s.exhausted;
    let Some((k, mask, region)) = best else {
        return Ok(GResult { g, k: 0, witness: None, complete, diagnostics: s.diagnostics });
    };
    let mut witness = None;
    if k > 0 {
        let sets = s.v_side(mask)?.expect("positive value has a pattern").1;
        let w = region.find_point(opts.height_cap, opts.residue_budget, opts.max_candidates)?;
        let vv = s.v_point(mask, &sets)?;
        match (w, vv) {
            (Some(w), Some(vv)) => {
                let k1 = vec_add(vg, &vec_scale(&w[..h], &order));
                let k2 = vec_add(vg, &vec_scale(&w[h..], &order));
                witness = Some(Tuple { g, v1: vv[..h].to_vec(), v2: vv[h..].to_vec(), k1, k2 });
            }
            _ => s.diagnostics.push(format!("g={g}: no explicit witness of height <= {}", opts.height_cap)),
        }
    }
    Ok(GResult { g, k, witness, complete, diagnostics: s.diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn b(xs: &[i64]) -> IntVec {
        ivec(xs)
    }

    /// Column of the component spanned by the `j`-th unit vector.
    fn component_of_axis(group: &VirtAbGroup, j: usize) -> usize {
        let hull = group.hull().unwrap();
        let e = crate::matrix::unit_vec(group.dim(), j);
        (0..hull.len()).find(|&i| !hull.components[i].project(&e).iter().all(Zero::is_zero)).unwrap()
    }

    #[test]
    fn diag3_table() {
        let ex = examples::diag3().unwrap();
        let grp = &ex.group;
        let t = pattern_table(grp, 0, &b(&[1, 1, 1]), &b(&[-1, -1, -1]), None).unwrap();
        let expected = ["uuu", "uvv", "vuv", "vvu"];
        for (h, row) in expected.iter().enumerate() {
            for (col, ch) in row.chars().enumerate() {
                let i = component_of_axis(grp, col);
                assert_eq!(t.cell(h, i).unwrap().symbol(), ch, "h={h} col={col}");
            }
        }
        let z = b(&[0, 0, 0]);
        let tk = pattern_table(grp, 0, &z, &z, None).unwrap();
        assert!(tk.strong.iter().all(|s| !s));
        assert!(tk.cells.iter().flatten().all(|c| *c == Cell::Vanishes));
    }

    #[test]
    fn classify_with_modulus() {
        let ex = examples::diag3().unwrap();
        let grp = &ex.group;
        let big = 4i64.pow(5);
        let v1 = b(&[1, big, 1]);
        let v2 = b(&[-1, -big, -1]);
        let h = 2; // (1,0)
        assert!(vanishes(grp, 0, component_of_axis(grp, 0), h, &v1, &v2).unwrap());
        assert_eq!(classify(grp, 0, component_of_axis(grp, 1), h, &v1, &v2, 5).unwrap(), Cell::GloballyUnsolvable);
        assert_eq!(classify(grp, 0, component_of_axis(grp, 2), 0, &v1, &v2, 5).unwrap(), Cell::LocallyUnsolvable);
        assert!(classify(grp, 0, 0, 0, &v1, &v2, 0).is_err());
    }

    #[test]
    fn admits_and_min_dim() {
        let ex = examples::diag3().unwrap();
        let grp = &ex.group;
        let t = ex.witness.clone().unwrap();
        assert!(admits(grp, ComponentSet::full(3), &t).unwrap());
        for k in 0..7u64 {
            assert!(!admits(grp, ComponentSet(k), &t).unwrap());
        }
        assert_eq!(min_admitting_dim(grp, &t).unwrap(), 3);
        let zero = Tuple::from_i64(0, &[0, 0, 0], &[0, 0, 0], &[0, 0, 0], &[0, 0, 0]);
        assert_eq!(min_admitting_dim(grp, &zero).unwrap(), 0);
        let bad = Tuple::from_i64(0, &[0, 0, 0], &[0, 0, 0], &[1, 0, 0], &[0, 0, 0]);
        assert!(matches!(min_admitting_dim(grp, &bad), Err(Error::NonMember)));
    }

    #[test]
    fn centralizer_errors() {
        let rep = crate::rep::IntRep::new(
            crate::group::FiniteGroup::from_matrix_generators(
                &[IntMat::from_i64(&[&[0, -1], &[1, -1]]), IntMat::from_i64(&[&[0, 1], &[1, 0]])],
                8,
            )
            .unwrap()
            .0,
            crate::group::FiniteGroup::from_matrix_generators(
                &[IntMat::from_i64(&[&[0, -1], &[1, -1]]), IntMat::from_i64(&[&[0, 1], &[1, 0]])],
                8,
            )
            .unwrap()
            .1,
        )
        .unwrap();
        let grp = VirtAbGroup::new_split(rep).unwrap();
        let s3 = grp.rep().group();
        let (g, h) = s3
            .elements()
            .flat_map(|a| s3.elements().map(move |b| (a, b)))
            .find(|&(a, b)| !s3.commutes(a, b))
            .unwrap();
        let z = b(&[0, 0]);
        assert!(matches!(strongly_unsolvable(&grp, g, h, &z, &z), Err(Error::NotInCentralizer(_))));
        assert!(matches!(vanishes(&grp, g, 0, h, &z, &z), Err(Error::NotInCentralizer(_))));
    }

    #[test]
    fn trivial_group_on_z() {
        let rep = crate::rep::IntRep::trivial(crate::group::FiniteGroup::cyclic(1), 1);
        let grp = VirtAbGroup::new_split(rep).unwrap();
        let t = Tuple::from_i64(0, &[1], &[0], &[0], &[0]);
        assert_eq!(min_admitting_dim(&grp, &t).unwrap(), 1);
    }

    #[test]
    fn solution_sets_sign_action() {
        let ex = examples::dihedral_line().unwrap();
        let sets = solution_sets(&ex.group, 0, 0).unwrap();
        // both h vanish, only e, only s, or neither: all four are realizable
        assert_eq!(sets.len(), 4);
        assert!(sets.iter().any(|(hs, _)| hs.is_empty()));
        assert!(sets.iter().any(|(hs, _)| hs.len() == 2));
    }

    #[test]
    fn exact_small_examples() {
        let opts = SearchOptions::default();
        for (name, k) in [("dihedral-line", 1), ("h0h0", 1), ("diag3", 3)] {
            let ex = examples::by_name(name).unwrap();
            let c = k3_exponent(&ex.group, ExponentMode::Exact, &[], &opts).unwrap();
            assert_eq!(c.k, k, "{name}");
            assert!(c.complete && c.diagnostics.is_empty(), "{name}: {:?}", c.diagnostics);
            let w = c.witness.unwrap();
            assert_eq!(min_admitting_dim(&ex.group, &w).unwrap(), k);
        }
    }
}
