//! Virtually abelian groups `H ≤ Z^h ⋊_ρ G` with `H ∩ Z^h = |G|Z^h`,
//! presented by cocycle representatives `v_g`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::hull::{square_hull, SquareHull};
use crate::lattice::{for_each_hnf_shape, solve_integer, Lattice};
use crate::matrix::{
    from_json_vec, to_json_vec, unit_vec, vec_add, vec_neg, vec_scale, vec_sub, zero_vec, IntMat,
    IntVec, JsonInt,
};
use crate::rep::IntRep;

/// An element `(v, g)` of `Z^h ⋊ G`. Membership in a particular `H` is
/// checked at API boundaries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub v: IntVec,
    pub g: GroupElement,
}

impl Element {
    pub fn new(v: IntVec, g: GroupElement) -> Self {
        Element { v, g }
    }

    pub fn from_i64(v: &[i64], g: GroupElement) -> Self {
        Element { v: crate::matrix::ivec(v), g }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.v.iter().map(|x| x.to_string()).collect();
        write!(f, "(({}), {})", v.join(","), self.g)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    v: Vec<JsonInt>,
    g: usize,
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr { v: to_json_vec(&self.v), g: self.g }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ElementRepr::deserialize(d)?;
        Ok(Element { v: from_json_vec(&r.v), g: r.g })
    }
}

/// The answer of a conjugacy decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjugacy {
    pub conjugate: bool,
    /// Some `a ∈ H` with `a·x·a⁻¹ = y` when conjugate.
    pub witness: Option<Element>,
}

/// A separating quotient `H → H/N` found by [`VirtAbGroup::min_separating_index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    /// `[H : N]`.
    pub index: BigInt,
    /// `N ⊆ |G|Z^h`, a ρ-invariant lattice.
    pub kernel: Lattice,
}

#[derive(Debug)]
pub struct VirtAbGroup {
    rep: IntRep,
    cocycle: Vec<IntVec>,
    gens: Vec<Element>,
    order: BigInt,
    /// `|G|·W_g` per element.
    scaled_w: Vec<Lattice>,
    hull: OnceLock<SquareHull>,
}

impl Clone for VirtAbGroup {
    fn clone(&self) -> Self {
        let hull = OnceLock::new();
        if let Some(h) = self.hull.get() {
            let _ = hull.set(h.clone());
        }
        VirtAbGroup {
            rep: self.rep.clone(),
            cocycle: self.cocycle.clone(),
            gens: self.gens.clone(),
            order: self.order.clone(),
            scaled_w: self.scaled_w.clone(),
            hull,
        }
    }
}

impl VirtAbGroup {
    /// The split group `|G|Z^h ⋊ G` (all `v_g = 0`).
    pub fn new_split(rep: IntRep) -> Result<Self> {
        let cocycle = vec![zero_vec(rep.dim()); rep.group().order()];
        Self::new(rep, cocycle)
    }

    /// Validates `v_e = 0` and the closure condition
    /// `v_g + ρ(g)v_h − v_{gh} ∈ |G|Z^h`.
    pub fn new(rep: IntRep, cocycle: Vec<IntVec>) -> Result<Self> {
        let g = rep.group().clone();
        let n = rep.dim();
        if cocycle.len() != g.order() {
            return Err(Error::DimensionMismatch { expected: g.order(), found: cocycle.len() });
        }
        if let Some(v) = cocycle.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        if !cocycle[0].iter().all(Zero::is_zero) {
            return Err(Error::NonzeroIdentityCocycle);
        }
        let order = BigInt::from(g.order());
        for a in g.elements() {
            for b in g.elements() {
                let d = vec_sub(&vec_add(&cocycle[a], &rep.act(a, &cocycle[b])), &cocycle[g.mul(a, b)]);
                if d.iter().any(|x| !x.is_multiple_of(&order)) {
                    return Err(Error::CocycleNotClosed(a, b));
                }
            }
        }
        let scaled_w = g.elements().map(|x| rep.w_lattice(x).scale(&order)).collect();
        let mut gens: Vec<Element> =
            g.elements().skip(1).map(|x| Element::new(cocycle[x].clone(), x)).collect();
        for j in 0..n {
            let e = vec_scale(&unit_vec(n, j), &order);
            gens.push(Element::new(vec_neg(&e), 0));
            gens.push(Element::new(e, 0));
        }
        Ok(VirtAbGroup { rep, cocycle, gens, order, scaled_w, hull: OnceLock::new() })
    }

    /// Replaces the generating set.
    pub fn with_generators(mut self, gens: Vec<Element>) -> Result<Self> {
        for x in &gens {
            self.check_member(x)?;
        }
        self.gens = gens;
        Ok(self)
    }

    pub fn rep(&self) -> &IntRep {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn group_order(&self) -> usize {
        self.rep.group().order()
    }

    pub fn order_big(&self) -> &BigInt {
        &self.order
    }

    pub fn cocycle(&self) -> &[IntVec] {
        &self.cocycle
    }

    pub fn v_of(&self, g: GroupElement) -> &IntVec {
        &self.cocycle[g]
    }

    pub fn generators(&self) -> &[Element] {
        &self.gens
    }

    /// The square hull of the holonomy representation, computed once.
    pub fn hull(&self) -> Result<&SquareHull> {
        if let Some(h) = self.hull.get() {
            return Ok(h);
        }
        let h = square_hull(&self.rep)?;
        Ok(self.hull.get_or_init(|| h))
    }

    /// `|G|·W_g`.
    pub fn scaled_w(&self, g: GroupElement) -> &Lattice {
        &self.scaled_w[g]
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.g < self.group_order()
            && x.v.len() == self.dim()
            && x.v.iter().zip(&self.cocycle[x.g]).all(|(a, b)| (a - b).is_multiple_of(&self.order))
    }

    fn check_member(&self, x: &Element) -> Result<()> {
        if x.v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.v.len() });
        }
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NonMember)
        }
    }

    pub fn identity(&self) -> Element {
        Element::new(zero_vec(self.dim()), 0)
    }

    /// `(v, g)(w, h) = (v + ρ(g)w, gh)` without membership checks.
    pub fn mul_raw(&self, x: &Element, y: &Element) -> Element {
        Element::new(vec_add(&x.v, &self.rep.act(x.g, &y.v)), self.rep.group().mul(x.g, y.g))
    }

    /// `(v, g)⁻¹ = (−ρ(g⁻¹)v, g⁻¹)` without membership checks.
    pub fn inv_raw(&self, x: &Element) -> Element {
        let gi = self.rep.group().inv(x.g);
        Element::new(vec_neg(&self.rep.act(gi, &x.v)), gi)
    }

    /// `a·x·a⁻¹` without membership checks.
    pub fn conj_raw(&self, a: &Element, x: &Element) -> Element {
        self.mul_raw(&self.mul_raw(a, x), &self.inv_raw(a))
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_member(x)?;
        self.check_member(y)?;
        Ok(self.mul_raw(x, y))
    }

    pub fn inv(&self, x: &Element) -> Result<Element> {
        self.check_member(x)?;
        Ok(self.inv_raw(x))
    }

    /// `a·x·a⁻¹`.
    pub fn conj(&self, a: &Element, x: &Element) -> Result<Element> {
        self.check_member(a)?;
        self.check_member(x)?;
        Ok(self.conj_raw(a, x))
    }

    /// All elements of word norm at most `radius`, with their norms, in
    /// breadth-first order.
    pub fn ball(&self, radius: usize, cap: usize) -> Result<Vec<(Element, usize)>> {
        let mut steps: Vec<Element> = Vec::new();
        for s in &self.gens {
            for t in [s.clone(), self.inv_raw(s)] {
                if !steps.contains(&t) {
                    steps.push(t);
                }
            }
        }
        let start = self.identity();
        let mut norm: HashMap<Element, usize> = HashMap::from([(start.clone(), 0)]);
        let mut out = vec![(start.clone(), 0)];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let d = norm[&x];
            if d == radius {
                continue;
            }
            for s in &steps {
                let y = self.mul_raw(&x, s);
                if !norm.contains_key(&y) {
                    if out.len() >= cap {
                        return Err(Error::BudgetExceeded(format!("ball of radius {radius} exceeds {cap} elements")));
                    }
                    norm.insert(y.clone(), d + 1);
                    out.push((y.clone(), d + 1));
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }

    /// `t_h = v1 − ρ(h)v2 − (id − ρ(g))v_h`.
    pub fn conjugacy_target(&self, g: GroupElement, h: GroupElement, v1: &[BigInt], v2: &[BigInt]) -> IntVec {
        let vh = &self.cocycle[h];
        let shift = vec_sub(vh, &self.rep.act(g, vh));
        vec_sub(&vec_sub(v1, &self.rep.act(h, v2)), &shift)
    }

    /// Moves `y` to the G-part of `x` by conjugating with some `(v_{g0}, g0)`.
    /// Returns the conjugator and the image, or `None` when the G-parts are
    /// not conjugate in `G`.
    fn align(&self, x: &Element, y: &Element) -> Option<(Element, Element)> {
        let g = self.rep.group();
        let g0 = *g.conjugators(y.g, x.g).first()?;
        let c = Element::new(self.cocycle[g0].clone(), g0);
        let y2 = self.conj_raw(&c, y);
        Some((c, y2))
    }

    /// Decides whether `x` and `y` are conjugate in `H`, with a witness `a`
    /// satisfying `a·x·a⁻¹ = y`.
    pub fn is_conjugate(&self, x: &Element, y: &Element) -> Result<Conjugacy> {
        self.check_member(x)?;
        self.check_member(y)?;
        let Some((c, y2)) = self.align(x, y) else {
            return Ok(Conjugacy { conjugate: false, witness: None });
        };
        let g = x.g;
        let target = &self.scaled_w[g];
        let one_minus = self.rep.one_minus(g);
        for h in self.rep.group().centralizer(g) {
            let t = self.conjugacy_target(g, h, &x.v, &y2.v);
            if !target.member(&t)? {
                continue;
            }
            let rhs: IntVec = t.iter().map(|a| a / &self.order).collect();
            let w = solve_integer(&one_minus, &rhs)?
                .ok_or_else(|| Error::Internal("membership without a solution".into()))?;
            let u = vec_add(&self.cocycle[h], &vec_scale(&w, &self.order));
            // a·y2·a⁻¹ = x with a = (u, h), and y2 = c·y·c⁻¹
            let a = Element::new(u, h);
            let witness = self.inv_raw(&self.mul_raw(&a, &c));
            debug_assert_eq!(&self.conj_raw(&witness, x), y);
            return Ok(Conjugacy { conjugate: true, witness: Some(witness) });
        }
        Ok(Conjugacy { conjugate: false, witness: None })
    }

    /// Checks that `N` is ρ-invariant and contained in `|G|Z^h`.
    pub fn check_quotient_lattice(&self, n: &Lattice) -> Result<()> {
        if n.ambient() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: n.ambient() });
        }
        if !Lattice::scaled_full(self.dim(), &self.order).contains(n)? {
            return Err(Error::NTooLarge);
        }
        if !self.rep.is_invariant(n)? {
            return Err(Error::NotInvariant);
        }
        Ok(())
    }

    /// Decides conjugacy of the images of `x` and `y` in `H/N`.
    pub fn is_conjugate_mod(&self, x: &Element, y: &Element, n: &Lattice) -> Result<bool> {
        self.check_member(x)?;
        self.check_member(y)?;
        self.check_quotient_lattice(n)?;
        let Some((_, y2)) = self.align(x, y) else {
            return Ok(false);
        };
        let target = n.sum(&self.scaled_w[x.g])?;
        for h in self.rep.group().centralizer(x.g) {
            if target.member(&self.conjugacy_target(x.g, h, &x.v, &y2.v))? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Minimal `[H : N]` over ρ-invariant `N ⊆ |G|Z^h` with `[H : N] ≤ budget`
    /// separating the conjugacy classes of `x` and `y`.
    pub fn min_separating_index(&self, x: &Element, y: &Element, budget: u64) -> Result<Option<Separation>> {
        let mut ctx = SeparationContext::new(self);
        ctx.min_separating_index(x, y, budget)
    }

    /// Builds the group generated by an extension of `Z^h` by `G` with the
    /// given normalized factor set, rescaled so that its translation part is
    /// `|G|Z^h`.
    pub fn embed_extension(rep: IntRep, factor_set: &[Vec<IntVec>]) -> Result<EmbeddedExtension> {
        let g = rep.group().clone();
        let n = rep.dim();
        let q = g.order();
        if factor_set.len() != q || factor_set.iter().any(|r| r.len() != q) {
            return Err(Error::NotACocycle(format!("factor set must be {q}x{q}")));
        }
        if factor_set.iter().flatten().any(|v| v.len() != n) {
            return Err(Error::NotACocycle("factor set values must have the module's dimension".into()));
        }
        let f = |a: usize, b: usize| &factor_set[a][b];
        for a in g.elements() {
            if !f(0, a).iter().all(Zero::is_zero) || !f(a, 0).iter().all(Zero::is_zero) {
                return Err(Error::NotACocycle(format!("not normalized at {a}")));
            }
        }
        for a in g.elements() {
            for b in g.elements() {
                for c in g.elements() {
                    let lhs = vec_add(&rep.act(a, f(b, c)), f(a, g.mul(b, c)));
                    let rhs = vec_add(f(a, b), f(g.mul(a, b), c));
                    if lhs != rhs {
                        return Err(Error::NotACocycle(format!("identity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        // unknowns c(0..q) stacked; equation rows (a, b, coordinate)
        let order = BigInt::from(q);
        let mut a_mat = IntMat::zeros(q * q * n, q * n);
        let mut rhs = Vec::with_capacity(q * q * n);
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for i in 0..n {
                    let row = (a * q + b) * n + i;
                    let add = |m: &mut IntMat, col: usize, val: BigInt| {
                        let cur = m.get(row, col).clone();
                        m.set(row, col, cur + val);
                    };
                    add(&mut a_mat, a * n + i, BigInt::from(1));
                    for j in 0..n {
                        add(&mut a_mat, b * n + j, rep.mat(a).get(i, j).clone());
                    }
                    add(&mut a_mat, ab * n + i, BigInt::from(-1));
                    rhs.push(&factor_set[a][b][i] * &order);
                }
            }
        }
        let sol = solve_integer(&a_mat, &rhs)?.ok_or(Error::NoIntegerSolution)?;
        let section: Vec<IntVec> = (0..q).map(|a| sol[a * n..(a + 1) * n].to_vec()).collect();
        let group = VirtAbGroup::new(rep, section.clone())?;
        let ext = EmbeddedExtension { group, section, factor_set: factor_set.to_vec() };
        ext.verify()?;
        Ok(ext)
    }
}

/// An extension embedded into `Z^h ⋊ G` via `(m, g) ↦ (|G|m + c(g), g)`.
#[derive(Clone, Debug)]
pub struct EmbeddedExtension {
    pub group: VirtAbGroup,
    /// The section change `c`.
    pub section: Vec<IntVec>,
    pub factor_set: Vec<Vec<IntVec>>,
}

impl EmbeddedExtension {
    /// Image of the extension element `(m, g)`.
    pub fn embed(&self, m: &[BigInt], g: GroupElement) -> Element {
        Element::new(vec_add(&vec_scale(m, self.group.order_big()), &self.section[g]), g)
    }

    /// Multiplication in the original extension.
    pub fn ext_mul(&self, x: (&[BigInt], GroupElement), y: (&[BigInt], GroupElement)) -> (IntVec, GroupElement) {
        let rep = self.group.rep();
        let v = vec_add(&vec_add(x.0, &rep.act(x.1, y.0)), &self.factor_set[x.1][y.1]);
        (v, rep.group().mul(x.1, y.1))
    }

    /// Checks that the embedding respects products of the generators
    /// `(0, g)` and `(e_j, e)` of the extension.
    pub fn verify(&self) -> Result<()> {
        let rep = self.group.rep();
        let n = rep.dim();
        let mut gens: Vec<(IntVec, GroupElement)> = rep.group().elements().map(|g| (zero_vec(n), g)).collect();
        gens.extend((0..n).map(|j| (unit_vec(n, j), 0)));
        for x in &gens {
            for y in &gens {
                let (v, g) = self.ext_mul((&x.0, x.1), (&y.0, y.1));
                let lhs = self.group.mul(&self.embed(&x.0, x.1), &self.embed(&y.0, y.1))?;
                if lhs != self.embed(&v, g) {
                    return Err(Error::Internal("embedding is not multiplicative".into()));
                }
            }
        }
        Ok(())
    }
}

/// Upper-triangular HNF in `i64` coordinates relative to the basis `|G|e_i`.
type Shape = Vec<Vec<i64>>;

/// Caches ρ-invariant sublattices of `|G|Z^h` across separation queries.
pub struct SeparationContext<'a> {
    group: &'a VirtAbGroup,
    gens: Vec<Vec<Vec<i64>>>,
    /// Invariant shapes in enumeration order, with their index.
    shapes: Vec<(u64, Shape)>,
    /// Enumeration is complete for all indices up to this bound.
    explored: u64,
}

impl<'a> SeparationContext<'a> {
    pub fn new(group: &'a VirtAbGroup) -> Self {
        let g = group.rep.group();
        // a generating set of G suffices for invariance
        let mut chosen: Vec<usize> = Vec::new();
        let mut span = vec![0usize];
        for x in g.elements() {
            if span.contains(&x) {
                continue;
            }
            chosen.push(x);
            let mut frontier = span.clone();
            while let Some(a) = frontier.pop() {
                for &s in &chosen {
                    let b = g.mul(a, s);
                    if !span.contains(&b) {
                        span.push(b);
                        frontier.push(b);
                    }
                }
            }
        }
        let gens = chosen
            .iter()
            .map(|&s| group.rep.mat(s).to_i64_rows().expect("holonomy matrices are small"))
            .collect();
        SeparationContext { group, gens, shapes: Vec::new(), explored: 0 }
    }

    fn is_invariant(&self, c: &[Vec<i64>]) -> bool {
        let n = c.len();
        self.gens.iter().all(|s| {
            c.iter().all(|row| {
                let mut w: Vec<i64> = (0..n).map(|i| (0..n).map(|j| s[i][j] * row[j]).sum()).collect();
                for (k, ck) in c.iter().enumerate() {
                    if w[k] % ck[k] != 0 {
                        return false;
                    }
                    let q = w[k] / ck[k];
                    if q != 0 {
                        for (wj, cj) in w.iter_mut().zip(ck) {
                            *wj -= q * cj;
                        }
                    }
                }
                true
            })
        })
    }

    /// Extends the cache to all invariant shapes of index at most `k`.
    fn explore_to(&mut self, k: u64) {
        if k <= self.explored {
            return;
        }
        let n = self.group.dim();
        let from = self.explored;
        let mut found = Vec::new();
        let _ = for_each_hnf_shape(n, k, |idx, c| {
            if idx > from && self.is_invariant(c) {
                found.push((idx, c.to_vec()));
            }
            ControlFlow::Continue(())
        });
        self.shapes.extend(found);
        self.explored = k;
    }

    /// The lattice `|G|·C` for a coordinate shape `C`.
    pub fn shape_lattice(&self, c: &[Vec<i64>]) -> Lattice {
        let n = self.group.dim();
        let rows: Vec<IntVec> =
            c.iter().map(|r| r.iter().map(|&x| BigInt::from(x) * self.group.order_big()).collect()).collect();
        Lattice::from_generators(&rows, n).expect("square shape")
    }

    /// See [`VirtAbGroup::min_separating_index`].
    pub fn min_separating_index(&mut self, x: &Element, y: &Element, budget: u64) -> Result<Option<Separation>> {
        let grp = self.group;
        let q = grp.group_order() as u64;
        if budget < q {
            return Err(Error::InvalidInput(format!("budget {budget} is below |G| = {q}")));
        }
        if grp.is_conjugate(x, y)?.conjugate {
            return Err(Error::InputsConjugate);
        }
        let n = grp.dim();
        let Some((_, y2)) = grp.align(x, y) else {
            return Ok(Some(Separation {
                index: BigInt::from(q),
                kernel: Lattice::scaled_full(n, grp.order_big()),
            }));
        };
        let g = x.g;
        // all targets t_h lie in |G|Z^h; work with t_h / |G| against C + W_g
        let taus: Vec<IntVec> = grp
            .rep
            .group()
            .centralizer(g)
            .into_iter()
            .map(|h| {
                grp.conjugacy_target(g, h, &x.v, &y2.v).iter().map(|a| a / grp.order_big()).collect()
            })
            .collect();
        let w = grp.rep.w_lattice(g);
        let max_k = budget / q;
        let mut k = 1;
        let mut pos = 0;
        while k <= max_k {
            // grow the cache geometrically
            let upto = (k * 2).min(max_k).max(k);
            self.explore_to(upto);
            while pos < self.shapes.len() {
                let (idx, c) = &self.shapes[pos];
                pos += 1;
                let rows: Vec<IntVec> = c.iter().map(|r| crate::matrix::ivec(r)).collect();
                let target = w.extend(&rows)?;
                let mut separated = true;
                for t in &taus {
                    if target.member(t)? {
                        separated = false;
                        break;
                    }
                }
                if separated {
                    return Ok(Some(Separation { index: BigInt::from(*idx * q), kernel: self.shape_lattice(c) }));
                }
            }
            k = upto + 1;
        }
        Ok(None)
    }
}

/// `‖x‖` lookup from a ball.
pub fn norm_table(ball: &[(Element, usize)]) -> HashMap<Element, usize> {
    ball.iter().cloned().collect()
}

/// Converts a small element to `i64` coordinates.
pub fn element_to_i64(x: &Element) -> Option<(Vec<i64>, usize)> {
    Some((x.v.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>()?, x.g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::matrix::ivec;

    fn dihedral() -> VirtAbGroup {
        let rep = IntRep::new(FiniteGroup::cyclic(2), vec![IntMat::identity(1), IntMat::from_i64(&[&[-1]])]).unwrap();
        VirtAbGroup::new_split(rep).unwrap()
    }

    fn e(v: &[i64], g: usize) -> Element {
        Element::from_i64(v, g)
    }

    #[test]
    fn arithmetic() {
        let h = dihedral();
        let x = e(&[4], 1);
        assert_eq!(h.mul(&h.identity(), &x).unwrap(), x);
        assert_eq!(h.inv(&x).unwrap(), e(&[4], 1));
        assert_eq!(h.mul(&x, &h.inv(&x).unwrap()).unwrap(), h.identity());
        assert_eq!(h.conj(&e(&[0], 1), &e(&[6], 0)).unwrap(), e(&[-6], 0));
        assert!(matches!(h.mul(&e(&[1], 0), &x), Err(Error::NonMember)));
    }

    #[test]
    fn closure_condition() {
        let rep = IntRep::new(FiniteGroup::cyclic(2), vec![IntMat::identity(1), IntMat::identity(1)]).unwrap();
        assert!(VirtAbGroup::new(rep.clone(), vec![ivec(&[0]), ivec(&[1])]).is_ok());
        let rep2 = IntRep::new(FiniteGroup::cyclic(3), vec![IntMat::identity(1); 3]).unwrap();
        assert!(matches!(
            VirtAbGroup::new(rep2, vec![ivec(&[0]), ivec(&[1]), ivec(&[1])]),
            Err(Error::CocycleNotClosed(..))
        ));
        assert!(matches!(
            VirtAbGroup::new(rep, vec![ivec(&[2]), ivec(&[0])]),
            Err(Error::NonzeroIdentityCocycle)
        ));
    }

    #[test]
    fn small_balls() {
        let h = dihedral();
        let b0 = h.ball(0, 100).unwrap();
        assert_eq!(b0, vec![(h.identity(), 0)]);
        let mut b1: Vec<Element> = h.ball(1, 100).unwrap().into_iter().map(|p| p.0).collect();
        b1.sort();
        let mut want = vec![e(&[0], 0), e(&[0], 1), e(&[2], 0), e(&[-2], 0)];
        want.sort();
        assert_eq!(b1, want);
        let sizes: Vec<usize> = (0..5).map(|r| h.ball(r, 1000).unwrap().len()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        assert!(matches!(h.ball(5, 3), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn conjugacy_in_dihedral_line() {
        let h = dihedral();
        // translations are conjugate to their negatives only
        assert!(h.is_conjugate(&e(&[2], 0), &e(&[-2], 0)).unwrap().conjugate);
        assert!(!h.is_conjugate(&e(&[2], 0), &e(&[4], 0)).unwrap().conjugate);
        // reflections (2k, σ) fall into two classes by k mod 2
        assert!(h.is_conjugate(&e(&[0], 1), &e(&[4], 1)).unwrap().conjugate);
        assert!(!h.is_conjugate(&e(&[0], 1), &e(&[2], 1)).unwrap().conjugate);
        let x = e(&[6], 1);
        let y = e(&[-2], 1);
        let c = h.is_conjugate(&x, &y).unwrap();
        assert!(c.conjugate);
        assert_eq!(h.conj(&c.witness.unwrap(), &x).unwrap(), y);
    }

    #[test]
    fn quotient_conjugacy_by_enumeration() {
        // In H/N with N = 4Z the images of (2, e) and (4, e) = (0, e) differ.
        let h = dihedral();
        let n = Lattice::from_generators(&[ivec(&[4])], 1).unwrap();
        assert!(!h.is_conjugate_mod(&e(&[2], 0), &e(&[4], 0), &n).unwrap());
        assert!(h.is_conjugate_mod(&e(&[2], 0), &e(&[-2], 0), &n).unwrap());
        // N = 2Z kills all translations
        let n2 = Lattice::from_generators(&[ivec(&[2])], 1).unwrap();
        assert!(h.is_conjugate_mod(&e(&[2], 0), &e(&[4], 0), &n2).unwrap());
        let bad = Lattice::from_generators(&[ivec(&[1])], 1).unwrap();
        assert!(matches!(h.is_conjugate_mod(&e(&[2], 0), &e(&[4], 0), &bad), Err(Error::NTooLarge)));
    }

    #[test]
    fn separation_in_dihedral_line() {
        let h = dihedral();
        let s = h.min_separating_index(&e(&[2], 0), &e(&[4], 0), 100).unwrap().unwrap();
        // N = 4Z separates: [H : 4Z] = 2 * 2 = 4; N = 2Z does not.
        assert_eq!(s.index, BigInt::from(4));
        assert_eq!(s.kernel, Lattice::from_generators(&[ivec(&[4])], 1).unwrap());
        let s = h.min_separating_index(&e(&[2], 0), &e(&[0], 1), 100).unwrap().unwrap();
        assert_eq!(s.index, BigInt::from(2));
        assert!(matches!(
            h.min_separating_index(&e(&[2], 0), &e(&[-2], 0), 100),
            Err(Error::InputsConjugate)
        ));
    }

    #[test]
    fn extension_of_z_by_z2() {
        let rep = IntRep::new(FiniteGroup::cyclic(2), vec![IntMat::identity(1); 2]).unwrap();
        let f = vec![vec![ivec(&[0]), ivec(&[0])], vec![ivec(&[0]), ivec(&[1])]];
        let ext = VirtAbGroup::embed_extension(rep.clone(), &f).unwrap();
        assert_eq!(ext.section[1], ivec(&[1]));
        let s = ext.embed(&ivec(&[0]), 1);
        let sq = ext.group.mul(&s, &s).unwrap();
        assert_eq!(sq, ext.embed(&ivec(&[1]), 0));
        let trivial = vec![vec![ivec(&[0]); 2]; 2];
        let ext = VirtAbGroup::embed_extension(rep.clone(), &trivial).unwrap();
        assert!(ext.section.iter().all(|v| v.iter().all(Zero::is_zero)));
        let bad = vec![vec![ivec(&[0]), ivec(&[0])], vec![ivec(&[0]), ivec(&[1])]];
        let sign = IntRep::new(FiniteGroup::cyclic(2), vec![IntMat::identity(1), IntMat::from_i64(&[&[-1]])]).unwrap();
        assert!(matches!(VirtAbGroup::embed_extension(sign, &bad), Err(Error::NotACocycle(_))));
    }
}
