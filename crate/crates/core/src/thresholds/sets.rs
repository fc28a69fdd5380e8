//! The exponent sets attached to `k` in characteristic `p`.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::Serialize;

use super::lucas::binom_mod_p;
use crate::algebra::is_prime;
use crate::error::{Error, Result};

/// Which shape `k` has relative to `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum KCase {
    /// `k < p`.
    KLessThanP,
    /// `k > p` and `p ∤ k − 1`.
    CoprimeKMinusOne,
    /// `k = p^b + 1`.
    PowerPlusOne { b: u32 },
    /// `k = m p^b + 1` with `m > 1`, `p ∤ m`.
    MultiplePlusOne { m: u64, b: u32 },
    /// `k = 2` with `p` odd.
    Quadratic,
    /// `p | k`, outside the scope of the bounds.
    PDividesK,
}

impl KCase {
    pub fn of(k: u64, p: u64) -> Result<KCase> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 2 {
            return Err(Error::pre(format!("k must be at least 2, got {k}")));
        }
        if k % p == 0 {
            return Ok(KCase::PDividesK);
        }
        if k == 2 {
            return Ok(KCase::Quadratic);
        }
        if k < p {
            return Ok(KCase::KLessThanP);
        }
        if (k - 1) % p != 0 {
            return Ok(KCase::CoprimeKMinusOne);
        }
        let (mut m, mut b) = (k - 1, 0u32);
        while m % p == 0 {
            m /= p;
            b += 1;
        }
        Ok(if m == 1 {
            KCase::PowerPlusOne { b }
        } else {
            KCase::MultiplePlusOne { m, b }
        })
    }

    /// Short tag used in tables.
    pub fn tag(&self) -> &'static str {
        match self {
            KCase::KLessThanP => "k<p",
            KCase::CoprimeKMinusOne => "p∤(k−1)",
            KCase::PowerPlusOne { .. } => "k=p^b+1",
            KCase::MultiplePlusOne { .. } => "k=mp^b+1 (m>1)",
            KCase::Quadratic => "k=2",
            KCase::PDividesK => "p|k",
        }
    }

    pub fn b(&self) -> Option<u32> {
        match *self {
            KCase::PowerPlusOne { b } | KCase::MultiplePlusOne { b, .. } => Some(b),
            _ => None,
        }
    }

    pub fn m(&self) -> Option<u64> {
        match *self {
            KCase::PowerPlusOne { .. } => Some(1),
            KCase::MultiplePlusOne { m, .. } => Some(m),
            _ => None,
        }
    }

    /// Whether the threshold formulas apply.
    pub fn in_scope(&self) -> bool {
        !matches!(self, KCase::Quadratic | KCase::PDividesK)
    }
}

fn require_scope(k: u64, p: u64) -> Result<KCase> {
    let case = KCase::of(k, p)?;
    if !case.in_scope() {
        return Err(Error::pre(format!("k={k}, p={p}: need p ∤ k and k ≥ 3")));
    }
    Ok(case)
}

/// `j_0` by scanning `0 < j < k` for `p ∤ j` and `p ∤ C(k, j)`.
pub fn j0_scan(k: u64, p: u64) -> Option<u64> {
    (1..k)
        .rev()
        .find(|&j| j % p != 0 && binom_mod_p(k, j, p) != 0)
}

/// `j_0` from the case split: `k − 1`, or `(m − 1)p^b + 1`.
pub fn j0_closed(k: u64, p: u64) -> Result<u64> {
    Ok(match require_scope(k, p)? {
        KCase::KLessThanP | KCase::CoprimeKMinusOne => k - 1,
        KCase::PowerPlusOne { .. } => 1,
        KCase::MultiplePlusOne { m, b } => (m - 1) * p.pow(b) + 1,
        _ => unreachable!(),
    })
}

/// `j_0`, failing if the scan and the closed form disagree.
pub fn j0_of(k: u64, p: u64) -> Result<u64> {
    let closed = j0_closed(k, p)?;
    let scan = j0_scan(k, p);
    if scan != Some(closed) {
        return Err(Error::InvariantViolation(format!(
            "j0 for k={k}, p={p}: scan {scan:?} vs closed form {closed}"
        )));
    }
    Ok(closed)
}

/// `ℛ`, `ℛ′` and derived quantities for one `(k, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentSets {
    pub j0: u64,
    pub r_set: BTreeSet<u64>,
    /// `ℛ′` in increasing order, which is also the list `t_1 < … < t_r`.
    pub r_prime: Vec<u64>,
    pub r: u64,
    pub kappa: u64,
}

fn r_closed(k: u64, p: u64, case: KCase) -> Ratio<i128> {
    let (k, p) = (k as i128, p as i128);
    match case {
        KCase::KLessThanP | KCase::CoprimeKMinusOne => Ratio::from_integer(k - k / p),
        KCase::PowerPlusOne { b } | KCase::MultiplePlusOne { b, .. } => {
            let one = Ratio::from_integer(1);
            let pinv = Ratio::new(1, p);
            (one - pinv) * Ratio::from_integer(k - p.pow(b)) + (one + pinv)
        }
        _ => unreachable!(),
    }
}

/// Builds `ℛ = {1..j_0, k} ∪ {k − 1}` and `ℛ′`, checking both descriptions
/// of `ℛ′` and the closed form for `r`.
pub fn build_sets(k: u64, p: u64) -> Result<ExponentSets> {
    let case = require_scope(k, p)?;
    let j0 = j0_of(k, p)?;
    let mut r_set: BTreeSet<u64> = (1..=j0).collect();
    r_set.insert(k);
    r_set.insert(k - 1);

    let direct: Vec<u64> = r_set.iter().copied().filter(|j| j % p != 0).collect();
    let via_powers: Vec<u64> = (1..=k)
        .filter(|&j| {
            if j % p == 0 {
                return false;
            }
            let mut v = j;
            while v <= k {
                if r_set.contains(&v) {
                    return true;
                }
                v *= p;
            }
            false
        })
        .collect();
    if direct != via_powers {
        return Err(Error::InvariantViolation(format!(
            "R' for k={k}, p={p}: {direct:?} vs {via_powers:?}"
        )));
    }
    let r = direct.len() as u64;
    let rc = r_closed(k, p, case);
    if rc != Ratio::from_integer(r as i128) {
        return Err(Error::InvariantViolation(format!(
            "r for k={k}, p={p}: |R'| = {r} vs closed form {rc}"
        )));
    }
    let n = direct.len();
    if direct[n - 1] != k || (n >= 2 && direct[n - 2] != j0) {
        return Err(Error::InvariantViolation(format!(
            "t-list for k={k}, p={p} does not end with (j0, k): {direct:?}"
        )));
    }
    let kappa = direct.iter().sum();
    Ok(ExponentSets {
        j0,
        r_set,
        r_prime: direct,
        r,
        kappa,
    })
}

/// Whether `S` is closed under: `p ∤ C(j, l)` for some `j ∈ S` forces
/// `l ∈ S`, checked for every `1 ≤ l ≤ probe_bound`.
pub fn check_condition_star(s: &BTreeSet<u64>, p: u64, probe_bound: u64) -> Result<bool> {
    let max = s.iter().max().copied().unwrap_or(0);
    if probe_bound < max {
        return Err(Error::pre(format!(
            "probe bound {probe_bound} is below max S = {max}"
        )));
    }
    Ok((1..=probe_bound).all(|l| s.contains(&l) || s.iter().all(|&j| binom_mod_p(j, l, p) == 0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j0_examples() {
        assert_eq!(j0_of(7, 3).unwrap(), 4);
        assert_eq!(j0_of(10, 3).unwrap(), 1);
        assert_eq!(j0_of(7, 5).unwrap(), 6);
        assert!(j0_of(6, 3).is_err());
    }

    #[test]
    fn sets_examples() {
        let s = build_sets(7, 3).unwrap();
        assert_eq!(s.r_prime, vec![1, 2, 4, 7]);
        assert_eq!((s.r, s.kappa), (4, 14));
        let s = build_sets(10, 3).unwrap();
        assert_eq!(s.r_prime, vec![1, 10]);
        assert_eq!((s.r, s.kappa), (2, 11));
        let s = build_sets(3, 5).unwrap();
        assert_eq!(s.r_prime, vec![1, 2, 3]);
        assert_eq!(s.r, 3);
    }

    #[test]
    fn condition_star_examples() {
        let r = build_sets(7, 3).unwrap().r_set;
        assert!(check_condition_star(&r, 3, 7).unwrap());
        assert!(!check_condition_star(&[2].into(), 3, 2).unwrap());
        assert!(check_condition_star(&[1].into(), 3, 1).unwrap());
    }
}
