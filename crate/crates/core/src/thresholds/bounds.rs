//! Variable-count thresholds `s_1(k)`, `u_2(k)`, the saving exponent `δ_0`
//! and the table that collects them.

use num_rational::Ratio;
use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::lucas::h0_of;
use super::sets::{build_sets, KCase};
use crate::error::{Error, Result};

type Q = Ratio<i128>;

fn q(n: i128) -> Q {
    Q::from_integer(n)
}

fn ceil(x: Q) -> i128 {
    x.ceil().to_integer()
}

fn floor(x: Q) -> i128 {
    x.floor().to_integer()
}

fn to_int(x: Q, what: &str) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::InvariantViolation(format!(
            "{what} = {x} is not an integer"
        )));
    }
    Ok(x.to_integer() as i64)
}

/// Formats an exact rational as `num/den`.
pub fn rational_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn ser_rational<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&rational_string(x)),
        None => s.serialize_none(),
    }
}

fn scoped(k: u64, p: u64) -> Result<KCase> {
    let case = KCase::of(k, p)?;
    if !case.in_scope() {
        return Err(Error::pre(format!("k={k}, p={p}: need p ∤ k and k ≥ 3")));
    }
    Ok(case)
}

/// `δ_0` for `p ∤ k`, `k ≥ 3`.
pub fn delta0_of(k: u64, p: u64) -> Result<Q> {
    Ok(match scoped(k, p)? {
        KCase::KLessThanP | KCase::CoprimeKMinusOne => Q::one(),
        KCase::PowerPlusOne { b } => Q::new(1, 16 * (p.pow(b) as i128 + 2)),
        KCase::MultiplePlusOne { b, .. } => Q::new(1, 4 * p.pow(b) as i128),
        _ => unreachable!(),
    })
}

/// One row of the minimisation: `η(j)`, `γ(j) = 1 + η − ⌈η⌉` and the
/// candidate value at `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaRow {
    pub j: u32,
    #[serde(serialize_with = "ser_q")]
    pub eta: Q,
    #[serde(serialize_with = "ser_q")]
    pub gamma: Q,
    pub value: i64,
}

fn ser_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(x))
}

impl EtaRow {
    fn new(j: u32, eta: Q, base: i128) -> EtaRow {
        let c = ceil(eta);
        EtaRow {
            j,
            eta,
            gamma: Q::one() + eta - q(c),
            value: (base - c) as i64,
        }
    }
}

/// A threshold value together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundValue {
    pub value: i64,
    pub minimizer_j: Option<u32>,
    pub rows: Vec<EtaRow>,
}

/// The admissible `j` for `k < p`: `1 ≤ j < k` and `2^j ≤ k(2k+1)`.
fn small_k_range(k: u64) -> Vec<u32> {
    let cap = (k as i128) * (2 * k as i128 + 1);
    (1..k as u32)
        .take_while(|&j| j < 100 && (1i128 << j) <= cap)
        .collect()
}

/// The same range under the alternative constraint `2^j ≤ (2r−1)(k+1)+1`
/// with `r = k`.
fn small_k_range_alt(k: u64) -> Vec<u32> {
    let (k, r) = (k as i128, k as i128);
    let cap = (2 * r - 1) * (k + 1) + 1;
    (1..k as u32)
        .take_while(|&j| j < 100 && (1i128 << j) <= cap)
        .collect()
}

fn minimize(rows: Vec<EtaRow>) -> BoundValue {
    let best = rows
        .iter()
        .min_by_key(|r| (r.value, r.j))
        .expect("nonempty range");
    BoundValue {
        value: best.value,
        minimizer_j: Some(best.j),
        rows: rows.clone(),
    }
}

/// `s_1(k)`.
pub fn s1_of(k: u64, p: u64) -> Result<BoundValue> {
    let case = scoped(k, p)?;
    let ki = k as i128;
    Ok(match case {
        KCase::KLessThanP => {
            let rows = small_k_range(k)
                .into_iter()
                .map(|j| {
                    let eta = Q::new(2 * ki * j as i128 - (1i128 << j), ki + 1 - j as i128);
                    EtaRow::new(j, eta, 2 * ki * ki + 1)
                })
                .collect();
            minimize(rows)
        }
        KCase::CoprimeKMinusOne => {
            let r = build_sets(k, p)?.r as i128;
            let row = EtaRow::new(3, Q::new(6 * r - 8, ki - 2), 2 * r * ki + 1);
            BoundValue {
                value: row.value,
                minimizer_j: None,
                rows: vec![row],
            }
        }
        KCase::PowerPlusOne { .. } => BoundValue {
            value: 4 * k as i64 + 5,
            minimizer_j: None,
            rows: vec![],
        },
        KCase::MultiplePlusOne { m, .. } => {
            let r = build_sets(k, p)?.r as i128;
            let corr = floor(Q::new(m as i128 - 1, 2) * (Q::one() - Q::new(1, p as i128)));
            BoundValue {
                value: (2 * r * ki + 2 * r - corr) as i64,
                minimizer_j: None,
                rows: vec![],
            }
        }
        _ => unreachable!(),
    })
}

/// `u_2(k)`.
pub fn u2_of(k: u64, p: u64) -> Result<BoundValue> {
    let case = scoped(k, p)?;
    let ki = k as i128;
    Ok(match case {
        KCase::KLessThanP => {
            let rows = small_k_range(k)
                .into_iter()
                .map(|j| {
                    let eta = Q::new(ki * j as i128 - (1i128 << (j - 1)), ki + 1 - j as i128);
                    EtaRow::new(j, eta, ki * ki + 1)
                })
                .collect();
            minimize(rows)
        }
        KCase::CoprimeKMinusOne => {
            let r = build_sets(k, p)?.r as i128;
            let row = EtaRow::new(3, Q::new(3 * r - 4, ki - 2), r * ki + 1);
            BoundValue {
                value: row.value,
                minimizer_j: None,
                rows: vec![row],
            }
        }
        KCase::PowerPlusOne { .. } => BoundValue {
            value: 2 * k as i64 + 3,
            minimizer_j: None,
            rows: vec![],
        },
        KCase::MultiplePlusOne { m, .. } => {
            let r = build_sets(k, p)?.r as i128;
            let corr = floor(Q::new(m as i128 - 1, 4) * (Q::one() - Q::new(1, p as i128)));
            BoundValue {
                value: (r * ki + r - corr) as i64,
                minimizer_j: None,
                rows: vec![],
            }
        }
        _ => unreachable!(),
    })
}

/// The published closed forms for `s_1` and `u_2` when `k > p`.
pub fn closed_forms(k: u64, p: u64) -> Result<(i64, i64)> {
    let case = scoped(k, p)?;
    let (ki, pi) = (k as i128, p as i128);
    match case {
        KCase::CoprimeKMinusOne => {
            let f = ki / pi;
            let s1 = 2 * ki * (ki - f) - 5 + floor(Q::new(6 * f - 4, ki - 2));
            let u2 = ki * (ki - f) - 2 + floor(Q::new(3 * f - 2, ki - 2));
            Ok((s1 as i64, u2 as i64))
        }
        KCase::PowerPlusOne { .. } => Ok((4 * k as i64 + 5, 2 * k as i64 + 3)),
        KCase::MultiplePlusOne { m, b } => {
            let pb = pi.pow(b);
            let pb1 = pi.pow(b - 1);
            let pinv = Q::new(1, pi);
            let w = Q::one() - pinv;
            let mm = q(m as i128 - 1);
            let base = q(pb - pb1 - 1) - pinv;
            let ck = q(2) * base + q(floor(mm * w / q(2)));
            let ck2 = base + q(floor(mm * w / q(4)));
            let s1 = (q(2) - q(2) * pinv) * q(ki * ki) - q(2 * (pb - pb1 - 2) * ki) - ck;
            let u2 = w * q(ki * ki) - q((pb - pb1 - 2) * ki) - ck2;
            Ok((to_int(s1, "closed-form s1")?, to_int(u2, "closed-form u2")?))
        }
        KCase::KLessThanP => Err(Error::pre(format!(
            "closed forms cover k > p only (k={k}, p={p})"
        ))),
        _ => unreachable!(),
    }
}

/// The bound stated for `3 ≤ k < p`: `2k² − 2⌊log₂ k⌋` for `s_1` and
/// `k² − ⌊log₂ k⌋` for `u_2`, sharpened to 86/43 at `k = 7` and to
/// `2k² − 11`/`k² − 5` for `k ≥ 8`.
pub fn small_k_stated_bounds(k: u64) -> (i64, i64) {
    let k = k as i64;
    let lg = 63 - (k as u64).leading_zeros() as i64;
    match k {
        7 => (86, 43),
        k if k >= 8 => (2 * k * k - 11, k * k - 5),
        k => (2 * k * k - 2 * lg, k * k - lg),
    }
}

/// One row of the thresholds table. Fields that do not apply to the case
/// are `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub p: u64,
    pub k: u64,
    pub case_tag: &'static str,
    pub b: Option<u32>,
    pub m: Option<u64>,
    pub j0: Option<u64>,
    pub r_set: Option<Vec<u64>>,
    pub r_prime_set: Option<Vec<u64>>,
    pub r: Option<u64>,
    pub kappa: Option<u64>,
    pub h0: u64,
    #[serde(serialize_with = "ser_rational")]
    pub delta0: Option<Q>,
    pub s1: Option<i64>,
    pub u2: Option<i64>,
    pub g_bound: Option<i64>,
    pub gplus_bound: Option<i64>,
    pub closed_form_s1: Option<i64>,
    pub closed_form_u2: Option<i64>,
    pub minimizer_j_s1: Option<u32>,
    pub minimizer_j_u2: Option<u32>,
    /// For `k < p`: whether the two stated `j`-ranges coincide.
    pub j_range_agrees: Option<bool>,
    pub details: Vec<EtaRow>,
}

/// Column order for tabular output.
pub const TABLE_COLUMNS: [&str; 20] = [
    "p",
    "k",
    "case",
    "b",
    "m",
    "j0",
    "R",
    "R_prime",
    "r",
    "kappa",
    "h0",
    "delta0",
    "s1",
    "u2",
    "G_bound",
    "Gplus_bound",
    "closed_s1",
    "closed_u2",
    "argmin_j_s1",
    "argmin_j_u2",
];

impl ThresholdReport {
    fn empty(k: u64, p: u64, case: KCase) -> ThresholdReport {
        ThresholdReport {
            p,
            k,
            case_tag: case.tag(),
            b: None,
            m: None,
            j0: None,
            r_set: None,
            r_prime_set: None,
            r: None,
            kappa: None,
            h0: h0_of(k, p),
            delta0: None,
            s1: None,
            u2: None,
            g_bound: None,
            gplus_bound: None,
            closed_form_s1: None,
            closed_form_u2: None,
            minimizer_j_s1: None,
            minimizer_j_u2: None,
            j_range_agrees: None,
            details: vec![],
        }
    }

    /// Values in [`TABLE_COLUMNS`] order; absent fields are empty strings.
    pub fn table_row(&self) -> Vec<String> {
        fn o<T: ToString>(x: &Option<T>) -> String {
            x.as_ref().map(|v| v.to_string()).unwrap_or_default()
        }
        fn set(x: &Option<Vec<u64>>) -> String {
            x.as_ref()
                .map(|v| {
                    v.iter()
                        .map(|j| j.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default()
        }
        vec![
            self.p.to_string(),
            self.k.to_string(),
            self.case_tag.to_string(),
            o(&self.b),
            o(&self.m),
            o(&self.j0),
            set(&self.r_set),
            set(&self.r_prime_set),
            o(&self.r),
            o(&self.kappa),
            self.h0.to_string(),
            self.delta0
                .as_ref()
                .map(rational_string)
                .unwrap_or_default(),
            o(&self.s1),
            o(&self.u2),
            o(&self.g_bound),
            o(&self.gplus_bound),
            o(&self.closed_form_s1),
            o(&self.closed_form_u2),
            o(&self.minimizer_j_s1),
            o(&self.minimizer_j_u2),
        ]
    }
}

/// Full report for one `(k, p)`. A closed form that disagrees with the
/// case formula is reported as an [`Error::InvariantViolation`].
pub fn threshold_report(k: u64, p: u64) -> Result<ThresholdReport> {
    let case = KCase::of(k, p)?;
    let mut rep = ThresholdReport::empty(k, p, case);
    match case {
        KCase::PDividesK => return Ok(rep),
        KCase::Quadratic => {
            rep.g_bound = Some(5);
            return Ok(rep);
        }
        _ => {}
    }
    rep.b = case.b();
    rep.m = case.m();
    let sets = build_sets(k, p)?;
    rep.j0 = Some(sets.j0);
    rep.r_set = Some(sets.r_set.iter().copied().collect());
    rep.r_prime_set = Some(sets.r_prime.clone());
    rep.r = Some(sets.r);
    rep.kappa = Some(sets.kappa);
    rep.delta0 = Some(delta0_of(k, p)?);
    let s1 = s1_of(k, p)?;
    let u2 = u2_of(k, p)?;
    let floor_bound = 2 * k as i64 + 1;
    rep.s1 = Some(s1.value);
    rep.u2 = Some(u2.value);
    rep.g_bound = Some(s1.value.max(floor_bound));
    rep.gplus_bound = Some(u2.value.max(floor_bound));
    rep.minimizer_j_s1 = s1.minimizer_j;
    rep.minimizer_j_u2 = u2.minimizer_j;
    if case == KCase::KLessThanP {
        rep.j_range_agrees = Some(small_k_range(k) == small_k_range_alt(k));
        let (bs, bu) = small_k_stated_bounds(k);
        if s1.value > bs || u2.value > bu {
            return Err(Error::InvariantViolation(format!(
                "k={k}, p={p}: s1={} u2={} exceed stated bounds {bs}/{bu}",
                s1.value, u2.value
            )));
        }
    } else {
        let (cs, cu) = closed_forms(k, p)?;
        rep.closed_form_s1 = Some(cs);
        rep.closed_form_u2 = Some(cu);
        if cs != s1.value || cu != u2.value {
            return Err(Error::InvariantViolation(format!(
                "k={k}, p={p}: closed forms ({cs}, {cu}) differ from ({}, {})",
                s1.value, u2.value
            )));
        }
    }
    let mut details = s1.rows;
    details.extend(u2.rows);
    rep.details = details;
    Ok(rep)
}

/// Rows for every `p` in `p_list` and `k` in `k_min..=k_max` with `p ∤ k`.
/// `k = 2` is included when in range.
pub fn bounds_table(p_list: &[u64], k_min: u64, k_max: u64) -> Result<Vec<ThresholdReport>> {
    if k_min < 2 || k_min > k_max {
        return Err(Error::pre(format!("invalid k range {k_min}..={k_max}")));
    }
    let points: Vec<(u64, u64)> = p_list
        .iter()
        .flat_map(|&p| {
            (k_min..=k_max)
                .filter(move |k| k % p != 0)
                .map(move |k| (p, k))
        })
        .collect();
    for &p in p_list {
        KCase::of(2, p)?;
    }
    points
        .par_iter()
        .map(|&(p, k)| threshold_report(k, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_k_values() {
        let s = s1_of(7, 11).unwrap();
        assert_eq!((s.value, s.minimizer_j), (86, Some(5)));
        let u = u2_of(7, 11).unwrap();
        assert_eq!((u.value, u.minimizer_j), (43, Some(5)));
        assert_eq!(s1_of(8, 101).unwrap().value, 117);
    }

    #[test]
    fn large_k_values() {
        assert_eq!(s1_of(7, 3).unwrap().value, 64);
        assert_eq!(u2_of(7, 3).unwrap().value, 32);
        assert_eq!(s1_of(4, 3).unwrap().value, 21);
        assert_eq!(u2_of(4, 3).unwrap().value, 11);
        assert_eq!(s1_of(10, 3).unwrap().value, 45);
        assert_eq!(s1_of(7, 5).unwrap().value, 79);
        assert_eq!(closed_forms(7, 5).unwrap().0, 79);
        assert_eq!(closed_forms(7, 3).unwrap(), (64, 32));
        assert_eq!(closed_forms(4, 3).unwrap().0, 21);
    }

    #[test]
    fn delta0_values() {
        assert_eq!(delta0_of(7, 5).unwrap(), Q::one());
        assert_eq!(delta0_of(7, 3).unwrap(), Q::new(1, 12));
        assert_eq!(delta0_of(10, 3).unwrap(), Q::new(1, 176));
    }

    #[test]
    fn table_rows() {
        let t = bounds_table(&[3], 2, 10).unwrap();
        assert_eq!(t[0].k, 2);
        assert_eq!(t[0].g_bound, Some(5));
        let ks: Vec<u64> = t.iter().map(|r| r.k).collect();
        assert_eq!(ks, vec![2, 4, 5, 7, 8, 10]);
        let r10 = t.iter().find(|r| r.k == 10).unwrap();
        assert_eq!((r10.s1, r10.case_tag), (Some(45), "k=p^b+1"));
        assert_eq!(threshold_report(6, 3).unwrap().case_tag, "p|k");
        assert_eq!(bounds_table(&[2], 3, 3).unwrap()[0].s1, Some(17));
        assert!(bounds_table(&[4], 3, 5).is_err());
    }
}
