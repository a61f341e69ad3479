//! Empirical conjugacy separability growth over ρ-invariant congruence
//! quotients, and probes along witness sequences.

use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{vec_add, vec_scale};
use crate::separability::Tuple;
use crate::vab::{Element, SeparationContext, VirtAbGroup};

/// Worst separating index among pairs of word norm at most `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub pairs_checked: u64,
    pub max_min_index: u64,
    pub witness: Option<(Element, Element)>,
    pub budget_hit: bool,
}

/// Separating index of one witness-sequence pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub j: usize,
    pub lcm: u64,
    /// `None` when the pair is conjugate or the budget ran out.
    pub index: Option<u64>,
    pub conjugate: bool,
    pub budget_hit: bool,
    /// `j^k` for the exponent `k` supplied by the caller.
    pub reference: u64,
}

/// `[lcm(1..1), …, lcm(1..j_max)]`.
pub fn lcm_points(j_max: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(j_max);
    let mut acc = 1u64;
    for j in 1..=j_max as u64 {
        acc = acc.lcm(&j);
        out.push(acc);
    }
    out
}

/// `((k1 + |G|⁴·lcm(1..n)·v1, g), (k2 + |G|⁴·lcm(1..n)·v2, g))`.
pub fn witness_sequence(group: &VirtAbGroup, tuple: &Tuple, n: usize) -> Result<(Element, Element)> {
    tuple.validate(group)?;
    if n == 0 {
        return Err(Error::InvalidInput("witness sequence index starts at 1".into()));
    }
    let lcm = *lcm_points(n).last().expect("n >= 1");
    let scale: BigInt = Pow::pow(group.order_big(), 4u32) * BigInt::from(lcm);
    let x = Element::new(vec_add(&tuple.k1, &vec_scale(&tuple.v1, &scale)), tuple.g);
    let y = Element::new(vec_add(&tuple.k2, &vec_scale(&tuple.v2, &scale)), tuple.g);
    Ok((x, y))
}

fn index_u64(x: &BigInt) -> Result<u64> {
    u64::try_from(x).map_err(|_| Error::Internal("separating index does not fit in u64".into()))
}

/// For each radius `1..=n_max`, the largest minimal separating index over
/// non-conjugate pairs in the ball (1 when there is none). Indices are taken
/// over ρ-invariant kernels only, so each value bounds the true one from above.
pub fn empirical_conj(group: &VirtAbGroup, n_max: usize, budget: u64, ball_cap: usize) -> Result<Vec<GrowthRow>> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    let ball = group.ball(n_max, ball_cap)?;
    let mut ctx = SeparationContext::new(group);
    let mut rows = Vec::with_capacity(n_max);
    let mut best = (1u64, None);
    let mut pairs = 0u64;
    let mut budget_hit = false;
    // the ball is in BFS order, so pairs first appear at the larger norm
    let mut start = 0;
    for n in 1..=n_max {
        let end = ball.partition_point(|(_, r)| *r <= n);
        for j in start..end {
            for i in 0..j {
                let (x, y) = (&ball[i].0, &ball[j].0);
                if group.is_conjugate(x, y)?.conjugate {
                    continue;
                }
                pairs += 1;
                match ctx.min_separating_index(x, y, budget)? {
                    Some(sep) => {
                        let idx = index_u64(&sep.index)?;
                        if idx > best.0 {
                            best = (idx, Some((x.clone(), y.clone())));
                        }
                    }
                    None => budget_hit = true,
                }
            }
        }
        start = end;
        rows.push(GrowthRow {
            n,
            pairs_checked: pairs,
            max_min_index: best.0,
            witness: best.1.clone(),
            budget_hit,
        });
    }
    Ok(rows)
}

/// Separating indices of the witness pairs at `j = 1..=j_max`, next to `j^k`.
pub fn probe_lower_bound(group: &VirtAbGroup, tuple: &Tuple, j_max: usize, budget: u64, k: u32) -> Result<Vec<ProbeRow>> {
    let mut ctx = SeparationContext::new(group);
    let points = lcm_points(j_max);
    let mut out = Vec::with_capacity(j_max);
    for j in 1..=j_max {
        let (x, y) = witness_sequence(group, tuple, j)?;
        let conjugate = group.is_conjugate(&x, &y)?.conjugate;
        let (index, budget_hit) = if conjugate {
            (None, false)
        } else {
            match ctx.min_separating_index(&x, &y, budget)? {
                Some(sep) => (Some(index_u64(&sep.index)?), false),
                None => (None, true),
            }
        };
        out.push(ProbeRow { j, lcm: points[j - 1], index, conjugate, budget_hit, reference: (j as u64).pow(k) });
    }
    Ok(out)
}

pub const CSV_HEADER: [&str; 5] = ["n", "pairs_checked", "max_min_index", "witness", "budget_hit"];

fn witness_field(w: &Option<(Element, Element)>) -> String {
    w.as_ref().map(|(x, y)| format!("{x:?} {y:?}")).unwrap_or_default()
}

/// Writes rows as CSV with a fixed column order.
pub fn write_csv<W: Write>(rows: &[GrowthRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.pairs_checked.to_string(),
            r.max_min_index.to_string(),
            witness_field(&r.witness),
            r.budget_hit.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv(rows: &[GrowthRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
}

/// Whether `i2 / i1 ≥ (j2 / j1)^k / slack`.
pub fn ratio_ok(i1: u64, i2: u64, j1: usize, j2: usize, k: u32, slack: f64) -> bool {
    let lhs = i2 as f64 / i1 as f64;
    let rhs = (j2 as f64 / j1 as f64).powi(k as i32) / slack;
    lhs >= rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn lcm_values() {
        assert_eq!(lcm_points(4), vec![1, 2, 6, 12]);
        assert_eq!(lcm_points(1), vec![1]);
        let p = lcm_points(10);
        assert!(p.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn sequence_formula() {
        let ex = examples::diag3().unwrap();
        let t = ex.witness.clone().unwrap();
        let (x, y) = witness_sequence(&ex.group, &t, 3).unwrap();
        assert_eq!(x, Element::from_i64(&[1536, 1536, 1536], 0));
        assert_eq!(y, Element::from_i64(&[-1536, -1536, -1536], 0));
        let (x1, _) = witness_sequence(&ex.group, &t, 1).unwrap();
        assert_eq!(x1, Element::from_i64(&[256, 256, 256], 0));
    }

    #[test]
    fn dihedral_growth_rows() {
        let ex = examples::dihedral_line().unwrap();
        let rows = empirical_conj(&ex.group, 4, 10_000, 100_000).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.windows(2).all(|w| w[0].max_min_index <= w[1].max_min_index));
        assert!(rows.iter().all(|r| !r.budget_hit));
        let again = empirical_conj(&ex.group, 4, 10_000, 100_000).unwrap();
        assert_eq!(rows, again);
        for r in &rows {
            if let Some((x, y)) = &r.witness {
                assert!(!ex.group.is_conjugate(x, y).unwrap().conjugate);
            }
        }
    }

    #[test]
    fn csv_shape() {
        assert_eq!(to_csv(&[]).unwrap(), "n,pairs_checked,max_min_index,witness,budget_hit\n");
        let row = GrowthRow { n: 1, pairs_checked: 2, max_min_index: 4, witness: None, budget_hit: false };
        assert_eq!(to_csv(&[row]).unwrap().lines().nth(1).unwrap(), "1,2,4,,false");
    }
}
