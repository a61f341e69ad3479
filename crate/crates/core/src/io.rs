//! The JSON input document and the report document.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::growth::{GrowthRow, ProbeRow};
use crate::lattice::{index, Index, Lattice};
use crate::matrix::{from_json_vec, IntMat, IntVec, JsonInt};
use crate::rep::IntRep;
use crate::separability::ExponentCertificate;
use crate::vab::{Element, EmbeddedExtension, VirtAbGroup};

/// Closure cap for matrix generators.
pub const CLOSURE_CAP: usize = 4096;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    Cayley(Vec<Vec<usize>>),
    MatrixGenerators(Vec<IntMat>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub group: GroupSpec,
    #[serde(default)]
    pub dim: Option<usize>,
    /// `rho[g]` for every element; required with a Cayley table.
    #[serde(default)]
    pub rho: Option<Vec<IntMat>>,
    /// `v_g` for every element; split when absent.
    #[serde(default)]
    pub cocycle: Option<Vec<Vec<JsonInt>>>,
    #[serde(default)]
    pub generators: Option<Vec<Element>>,
    /// `f[a][b]`, a normalized 2-cocycle of an extension of `Z^h` by `G`.
    #[serde(default)]
    pub factor_set: Option<Vec<Vec<Vec<JsonInt>>>>,
}

/// The group described by an input document.
pub struct Loaded {
    pub group: VirtAbGroup,
    pub extension: Option<EmbeddedExtension>,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(&self) -> Result<Loaded> {
        let rep = self.representation()?;
        if let Some(d) = self.dim {
            if d != rep.dim() {
                return Err(Error::DimensionMismatch { expected: d, found: rep.dim() });
            }
        }
        let (group, extension) = match (&self.factor_set, &self.cocycle) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidInput("give either a cocycle or a factor set, not both".into()))
            }
            (Some(fs), None) => {
                let fs: Vec<Vec<IntVec>> =
                    fs.iter().map(|row| row.iter().map(|v| from_json_vec(v)).collect()).collect();
                let ext = VirtAbGroup::embed_extension(rep, &fs)?;
                ext.verify()?;
                (ext.group.clone(), Some(ext))
            }
            (None, Some(c)) => (VirtAbGroup::new(rep, c.iter().map(|v| from_json_vec(v)).collect())?, None),
            (None, None) => (VirtAbGroup::new_split(rep)?, None),
        };
        let group = match &self.generators {
            Some(gens) => group.with_generators(gens.clone())?,
            None => group,
        };
        Ok(Loaded { group, extension })
    }

    fn representation(&self) -> Result<IntRep> {
        match &self.group {
            GroupSpec::Cayley(table) => {
                let rho = self
                    .rho
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("a Cayley table needs rho".into()))?;
                if rho.len() != table.len() {
                    return Err(Error::DimensionMismatch { expected: table.len(), found: rho.len() });
                }
                let (g, relabel) = FiniteGroup::from_cayley_relabeled(table.clone())?;
                let mut mats = vec![IntMat::zeros(0, 0); rho.len()];
                for (old, m) in rho.iter().enumerate() {
                    mats[relabel[old]] = m.clone();
                }
                IntRep::new(g, mats)
            }
            GroupSpec::MatrixGenerators(gens) => {
                if self.rho.is_some() {
                    return Err(Error::InvalidInput("rho is implied by matrix generators".into()));
                }
                if gens.is_empty() {
                    let d = self.dim.ok_or_else(|| Error::InvalidInput("no generators and no dim".into()))?;
                    return Ok(IntRep::trivial(FiniteGroup::cyclic(1), d));
                }
                let (g, mats) = FiniteGroup::from_matrix_generators(gens, CLOSURE_CAP)?;
                IntRep::new(g, mats)
            }
        }
    }

    /// The document describing a group, with its representation listed per element.
    pub fn from_group(group: &VirtAbGroup) -> Self {
        let rep = group.rep();
        let split = group.cocycle().iter().all(|v| v.iter().all(num_traits::Zero::is_zero));
        InputDocument {
            group: GroupSpec::Cayley(rep.group().table()),
            dim: Some(rep.dim()),
            rho: Some(rep.mats().to_vec()),
            cocycle: (!split).then(|| group.cocycle().iter().map(|v| crate::matrix::to_json_vec(v)).collect()),
            generators: None,
            factor_set: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub index: usize,
    pub rank: usize,
    pub d: usize,
    pub multiplicity: usize,
    pub orbit_size: usize,
    /// Character of the Galois orbit sum.
    pub character: Vec<i64>,
    /// `M_i = basis / den`.
    pub basis: Lattice,
    pub den: JsonInt,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HullSummary {
    pub prime: u64,
    pub components: Vec<ComponentSummary>,
    pub naive_bound: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WvEntry {
    pub g: usize,
    pub w: Lattice,
    pub v: Lattice,
    /// `[V_g : W_g]`.
    pub v_over_w: JsonInt,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugacyAnswer {
    pub x: Element,
    pub y: Element,
    pub conjugate: bool,
    pub witness: Option<Element>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ReportDocument {
    pub name: Option<String>,
    pub group_order: usize,
    pub dim: usize,
    pub validation: Vec<String>,
    pub hull: Option<HullSummary>,
    pub wv: Vec<WvEntry>,
    pub exponent: Vec<ExponentCertificate>,
    pub conjugacy: Vec<ConjugacyAnswer>,
    pub growth: Vec<GrowthRow>,
    pub probe: Vec<ProbeRow>,
    pub seed: u64,
}

/// Validation, square hull, `W_g`/`V_g` and the naive bound.
pub fn analyze(group: &VirtAbGroup) -> Result<ReportDocument> {
    let rep = group.rep();
    rep.validate()?;
    let hull = group.hull()?;
    let mut validation = vec![
        "representation is a homomorphism into GL(h, Z)".to_string(),
        "cocycle closes up to |G|Z^h".to_string(),
    ];
    if !hull.sandwich_holds(rep)? {
        return Err(Error::Internal("square hull sandwich fails".into()));
    }
    validation.push("|G|M' ⊆ M ⊆ M' holds for the square hull M'".into());
    let components = hull
        .components
        .iter()
        .map(|c| ComponentSummary {
            index: c.index,
            rank: c.rank(),
            d: c.d,
            multiplicity: c.multiplicity,
            orbit_size: c.orbit_size,
            character: c.orbit_char.values.clone(),
            basis: c.lattice.num.clone(),
            den: JsonInt(c.lattice.den.clone()),
        })
        .collect();
    let mut wv = Vec::new();
    for g in rep.group().elements() {
        let w = rep.w_lattice(g);
        let v = w.radical();
        let idx = match index(&w, &v)? {
            Index::Finite(n) => n,
            Index::Infinite => return Err(Error::Internal("W_g has lower rank than its radical".into())),
        };
        wv.push(WvEntry { g, w, v, v_over_w: JsonInt(idx) });
    }
    Ok(ReportDocument {
        group_order: rep.group().order(),
        dim: rep.dim(),
        validation,
        hull: Some(HullSummary { prime: hull.prime, components, naive_bound: hull.naive_bound() }),
        wv,
        ..Default::default()
    })
}

impl ReportDocument {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// A short human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(s, "example: {n}");
        }
        let _ = writeln!(s, "|G| = {}, h = {}", self.group_order, self.dim);
        if let Some(h) = &self.hull {
            let _ = writeln!(s, "square hull (prime {}): {} component(s)", h.prime, h.components.len());
            for c in &h.components {
                let _ = writeln!(
                    s,
                    "  M_{}: rank {}, d = {}, multiplicity {}, character {:?}",
                    c.index + 1,
                    c.rank,
                    c.d,
                    c.multiplicity,
                    c.character
                );
            }
            let _ = writeln!(s, "naive bound: {}", h.naive_bound);
        }
        for e in &self.exponent {
            let _ = writeln!(
                s,
                "exponent ({:?}): k = {}{}",
                e.mode,
                e.k,
                if e.complete { String::new() } else { format!(" (incomplete, in [{}, {}])", e.lower, e.upper) }
            );
            for d in &e.diagnostics {
                let _ = writeln!(s, "  diagnostic: {d}");
            }
        }
        for c in &self.conjugacy {
            let _ = writeln!(s, "{:?} ~ {:?}: {}", c.x, c.y, c.conjugate);
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "  conjugator {w:?}");
            }
        }
        for r in &self.probe {
            let idx = r.index.map_or("-".to_string(), |i| i.to_string());
            let _ = writeln!(s, "probe j={} lcm={} index={} reference={}", r.j, r.lcm, idx, r.reference);
        }
        s
    }
}

/// Re-checks the witnesses of a report against a group.
pub fn verify_report(group: &VirtAbGroup, report: &ReportDocument) -> Result<()> {
    for c in &report.conjugacy {
        let answer = group.is_conjugate(&c.x, &c.y)?;
        if answer.conjugate != c.conjugate {
            return Err(Error::Internal("conjugacy answer does not re-verify".into()));
        }
        if let Some(w) = &c.witness {
            if group.conj(w, &c.x)? != c.y {
                return Err(Error::Internal("conjugator does not re-verify".into()));
            }
        }
    }
    for e in &report.exponent {
        if let Some(t) = &e.witness {
            let k = crate::separability::min_admitting_dim(group, t)?;
            if k != e.k {
                return Err(Error::Internal(format!("witness tuple evaluates to {k}, report says {}", e.k)));
            }
        }
    }
    if let Some(h) = &report.hull {
        let hull = group.hull()?;
        let same = h.components.len() == hull.len()
            && h.components.iter().zip(&hull.components).all(|(a, b)| a.basis == b.lattice.num && a.den.0 == b.lattice.den);
        if !same {
            return Err(Error::Internal("square hull does not re-verify".into()));
        }
    }
    Ok(())
}

/// Parses an element written as JSON (`{"v": [..], "g": ..}`) or as `v1,v2,..;g`.
pub fn parse_element(text: &str) -> Result<Element> {
    let t = text.trim();
    if t.starts_with('{') {
        return Ok(serde_json::from_str(t)?);
    }
    let (v, g) = t
        .split_once(';')
        .ok_or_else(|| Error::InvalidInput(format!("element '{t}' is not of the form v1,v2,..;g")))?;
    let v = v
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<BigInt>().map_err(|e| Error::InvalidInput(format!("'{s}': {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let g = g.trim().parse().map_err(|e| Error::InvalidInput(format!("'{g}': {e}")))?;
    Ok(Element::new(v, g))
}
