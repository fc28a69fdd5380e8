//! Exact counts: strict representations, local solutions, diagonal systems.

mod keys;
mod vinogradov;
mod witness;

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    all_below, jqk_closure, quadrature_t, round_to_integer, Fe, Field, Poly, INTEGER_TOL,
};
use crate::error::{Error, Result};
use crate::expsums::{PowerTable, WaringInstance};
use keys::KeyCodec;

pub use vinogradov::{vinogradov_count, DiagonalSystem, VinogradovMethod};
pub use witness::witness_in_jqk_ring;

/// Default cap on enumeration steps.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

fn require_nonzero(n: &Poly) -> Result<()> {
    if n.is_zero() {
        Err(Error::pre("n must be nonzero"))
    } else {
        Ok(())
    }
}

fn check_budget(what: &str, needed: Option<u128>, cap: u64) -> Result<()> {
    match needed {
        Some(n) if n <= cap as u128 => Ok(()),
        _ => Err(Error::BudgetExceeded {
            what: what.into(),
            needed: needed.unwrap_or(u128::MAX),
            cap,
        }),
    }
}

/// Leading coefficient outside the additive closure of `k`-th powers, and
/// `k | deg n`.
pub fn is_exceptional(n: &Poly, k: u32, f: &Field) -> Result<bool> {
    require_nonzero(n)?;
    let d = n.degree().unwrap() as u32;
    if d % k != 0 {
        return Ok(false);
    }
    Ok(!jqk_closure(f, k).contains(&n.lead()))
}

/// `P_k(n)`: `⌈deg n / k⌉`, or `deg n / k + 1` for exceptional `n`.
pub fn strict_p(n: &Poly, k: u32, f: &Field) -> Result<u32> {
    let d = n.degree().ok_or_else(|| Error::pre("n must be nonzero"))? as u32;
    if is_exceptional(n, k, f)? {
        Ok(d / k + 1)
    } else {
        Ok(d.div_ceil(k))
    }
}

/// `b(n)`: the leading coefficient when `k | deg n` and `n` is not
/// exceptional, zero otherwise.
pub fn b_of(n: &Poly, k: u32, f: &Field) -> Result<Fe> {
    require_nonzero(n)?;
    let d = n.degree().unwrap() as u32;
    if d % k == 0 && !is_exceptional(n, k, f)? {
        Ok(n.lead())
    } else {
        Ok(Fe::ZERO)
    }
}

/// Largest `q^s` for which [`j_infty`] also runs the direct enumeration.
pub const J_INFTY_DIRECT_CAP: u64 = 10_000_000;

/// `#{y ∈ F_q^s \ {0} : y_1^k + ... + y_s^k = b}` by enumeration.
pub fn j_infty_direct(b: Fe, k: u32, s: u32, f: &Field) -> Result<u128> {
    let q = f.q() as u64;
    check_budget(
        "j_infty enumeration",
        q.checked_pow(s).map(|v| v as u128),
        J_INFTY_DIRECT_CAP,
    )?;
    let pw: Vec<Fe> = f.elements().map(|y| f.pow(y, k as u64)).collect();
    let n = q.pow(s);
    let count = (1..n)
        .into_par_iter()
        .filter(|&i| {
            let mut v = i;
            let mut acc = Fe::ZERO;
            for _ in 0..s {
                acc = f.add(acc, pw[(v % q) as usize]);
                v /= q;
            }
            acc == b
        })
        .count();
    Ok(count as u128)
}

/// The same count by `s`-fold convolution of the `k`-th power distribution.
pub fn j_infty_convolution(b: Fe, k: u32, s: u32, f: &Field) -> u128 {
    let q = f.q() as usize;
    let mut single = vec![0u128; q];
    for y in f.elements() {
        single[f.pow(y, k as u64).index()] += 1;
    }
    let mut dist = vec![0u128; q];
    dist[0] = 1;
    for _ in 0..s {
        let mut next = vec![0u128; q];
        for (a, &ca) in dist.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (c, &cc) in single.iter().enumerate() {
                if cc != 0 {
                    next[f.add(f.elem(a), f.elem(c)).index()] += ca * cc;
                }
            }
        }
        dist = next;
    }
    dist[b.index()] - u128::from(b.is_zero())
}

/// `J_∞`: both evaluations, which must agree whenever both run.
pub fn j_infty(b: Fe, k: u32, s: u32, f: &Field) -> Result<u128> {
    if s < 1 {
        return Err(Error::pre("s must be at least 1"));
    }
    let conv = j_infty_convolution(b, k, s, f);
    match j_infty_direct(b, k, s, f) {
        Ok(direct) if direct != conv => Err(Error::InvariantViolation(format!(
            "J_inf mismatch: direct {direct}, convolution {conv}"
        ))),
        Ok(_) | Err(Error::BudgetExceeded { .. }) => Ok(conv),
        Err(e) => Err(e),
    }
}

/// A target `n` together with the box `I_X` its summands range over.
#[derive(Clone, Debug)]
pub struct StrictProblem {
    pub inst: WaringInstance,
    pub n: Poly,
    pub p: u32,
    pub x: u32,
}

impl StrictProblem {
    /// The strict problem: `P = P_k(n)`, `X = P + 1`.
    pub fn new(inst: WaringInstance, n: Poly) -> Result<StrictProblem> {
        let p = strict_p(&n, inst.k, &inst.field)?;
        Ok(StrictProblem {
            inst,
            n,
            p,
            x: p + 1,
        })
    }

    /// Counts over an explicitly chosen box `I_X`; any `n`, including zero.
    pub fn with_box(inst: WaringInstance, n: Poly, x: u32) -> Result<StrictProblem> {
        if x == 0 {
            return Err(Error::pre("X must be at least 1"));
        }
        Ok(StrictProblem {
            inst,
            n,
            p: x - 1,
            x,
        })
    }

    /// Coefficients needed to hold every sum of `k`-th powers and `n`.
    fn window_len(&self) -> usize {
        let d = (self.inst.k * (self.x - 1)) as i64;
        (d.max(self.n.deg_i64()) + 1) as usize
    }

    fn power_vectors(&self, codec: &KeyCodec) -> Result<Vec<Vec<Fe>>> {
        let f = &self.inst.field;
        all_below(f, self.x)
            .iter()
            .map(|x| codec.dense(&x.pow(self.inst.k, f)))
            .collect()
    }
}

/// `R_{s,k}(n)` by enumerating all of `(I_X)^s`.
pub fn count_reps_bruteforce(prob: &StrictProblem, budget: u64) -> Result<u128> {
    let f = &prob.inst.field;
    let s = prob.inst.s;
    let qx = (f.q() as u128).checked_pow(prob.x);
    check_budget(
        "brute-force count",
        qx.and_then(|v| v.checked_pow(s)),
        budget,
    )?;
    let codec = KeyCodec::new(f, prob.window_len())?;
    let pows = prob.power_vectors(&codec)?;
    let target = codec.dense(&prob.n)?;

    fn rec(
        codec: &KeyCodec,
        pows: &[Vec<Fe>],
        acc: &[Fe],
        left: u32,
        target: &[Fe],
        scratch: &mut Vec<Vec<Fe>>,
    ) -> u128 {
        if left == 0 {
            return u128::from(acc == target);
        }
        let mut next = scratch.pop().unwrap_or_else(|| vec![Fe::ZERO; codec.len()]);
        let mut total = 0;
        for v in pows {
            codec.add_into(acc, v, &mut next);
            total += rec(codec, pows, &next, left - 1, target, scratch);
        }
        scratch.push(next);
        total
    }

    let total = pows
        .par_iter()
        .map(|first| {
            let mut scratch = Vec::new();
            rec(&codec, &pows, first, s - 1, &target, &mut scratch)
        })
        .sum();
    Ok(total)
}

/// `R_{s,k}(n)` by meet in the middle: tabulate the sums of `s_1 = ⌈s/2⌉`
/// powers, then probe with `n` minus each sum of the remaining `s_2`.
pub fn count_reps_mitm(prob: &StrictProblem, budget: u64) -> Result<u128> {
    let f = &prob.inst.field;
    let s = prob.inst.s;
    let s1 = s.div_ceil(2);
    let s2 = s - s1;
    let qx = (f.q() as u128).checked_pow(prob.x);
    check_budget(
        "meet-in-the-middle count",
        qx.and_then(|v| v.checked_pow(s1)),
        budget,
    )?;
    let codec = KeyCodec::new(f, prob.window_len())?;
    let pows = prob.power_vectors(&codec)?;
    let target = codec.dense(&prob.n)?;
    let left = codec.sumset(&pows, s1);
    let right = codec.sumset(&pows, s2);
    let mut buf = vec![Fe::ZERO; codec.len()];
    let mut diff = vec![Fe::ZERO; codec.len()];
    let mut total = 0u128;
    for (&key, &mult) in &right {
        codec.decode(key, &mut buf);
        codec.sub_into(&target, &buf, &mut diff);
        if let Some(&m) = left.get(&codec.encode(&diff)) {
            total += m * mult;
        }
    }
    Ok(total)
}

/// `R_{s,k}(n) = ∫_𝕋 g(α)^s e(-nα) dα`, by exact quadrature with
/// `M = max(k(X-1), deg n) + 1` fractional digits.
pub fn count_reps_quadrature(prob: &StrictProblem, budget: u64) -> Result<u128> {
    let v = quadrature_integral(prob, budget)?;
    let r = round_to_integer(v, INTEGER_TOL)?;
    u128::try_from(r).map_err(|_| Error::InvariantViolation(format!("negative count {r}")))
}

/// The unrounded integral behind [`count_reps_quadrature`].
pub fn quadrature_integral(prob: &StrictProblem, budget: u64) -> Result<Complex64> {
    let f = &prob.inst.field;
    let m = (prob.window_len()) as u32;
    let table = PowerTable::new(f, prob.inst.k, prob.x);
    let points = (f.q() as u128).checked_pow(m);
    check_budget(
        "quadrature",
        points.map(|p| p * table.powers().len() as u128),
        budget,
    )?;
    let s = prob.inst.s as i32;
    let n = &prob.n;
    quadrature_t(f, m, |a| {
        let g = table.weyl_sum(a).expect("window covers k(X-1)+1");
        let e = f.char_e_q(
            f.neg(
                a.res_of_poly_product(n, f)
                    .expect("window covers deg n + 1"),
            ),
        );
        g.powi(s) * e
    })
}

/// Counts `R_{s,k}(n)` for every target in a fixed box at once, from the
/// full distribution of `s`-fold sums of `k`-th powers.
#[derive(Clone, Debug)]
pub struct RepTable {
    codec: KeyCodec,
    x: u32,
    dist: HashMap<u128, u128>,
}

impl RepTable {
    pub fn new(inst: &WaringInstance, x: u32, max_deg_n: u32, budget: u64) -> Result<RepTable> {
        if x == 0 {
            return Err(Error::pre("X must be at least 1"));
        }
        let f = &inst.field;
        let len = (inst.k * (x - 1)).max(max_deg_n) as usize + 1;
        let codec = KeyCodec::new(f, len)?;
        let qx = (f.q() as u128).pow(x);
        let width = (f.q() as u128).checked_pow(len as u32);
        let per_step = width.map(|w| w.min(qx.saturating_pow(inst.s)) * qx);
        check_budget(
            "representation table",
            per_step.map(|v| v * inst.s as u128),
            budget,
        )?;
        let pows: Vec<Vec<Fe>> = all_below(f, x)
            .iter()
            .map(|p| codec.dense(&p.pow(inst.k, f)))
            .collect::<Result<_>>()?;
        let dist = codec.sumset(&pows, inst.s);
        Ok(RepTable { codec, x, dist })
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    pub fn count(&self, n: &Poly) -> Result<u128> {
        let v = self
            .codec
            .dense(n)
            .map_err(|_| Error::pre("n exceeds the table window"))?;
        Ok(self.dist.get(&self.codec.encode(&v)).copied().unwrap_or(0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Brute,
    Mitm,
}

/// Serialised form of one count.
#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub n: String,
    pub k: u32,
    pub s: u32,
    pub q: u32,
    #[serde(rename = "P")]
    pub p: u32,
    #[serde(rename = "X")]
    pub x: u32,
    pub exceptional: bool,
    pub count: String,
    pub method: String,
}

impl CountReport {
    pub fn new(prob: &StrictProblem, count: u128, method: &str) -> Result<CountReport> {
        let f = &prob.inst.field;
        Ok(CountReport {
            n: prob.n.display(f),
            k: prob.inst.k,
            s: prob.inst.s,
            q: f.q(),
            p: prob.p,
            x: prob.x,
            exceptional: !prob.n.is_zero() && is_exceptional(&prob.n, prob.inst.k, f)?,
            count: count.to_string(),
            method: method.into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    fn inst(q: u32, k: u32, s: u32) -> WaringInstance {
        WaringInstance::new(f(q), k, s).unwrap()
    }

    #[test]
    fn exceptional_and_p() {
        let f4 = f(4);
        let u = f4.from_coords(&[0, 1]).unwrap();
        let n = Poly::monomial(u, 3);
        assert!(is_exceptional(&n, 3, &f4).unwrap());
        assert_eq!(strict_p(&n, 3, &f4).unwrap(), 2);
        assert_eq!(b_of(&n, 3, &f4).unwrap(), Fe::ZERO);
        assert!(!is_exceptional(&Poly::monomial(u, 2), 3, &f4).unwrap());

        let f3 = f(3);
        let n = Poly::parse("t^4+1", &f3).unwrap();
        assert!(!is_exceptional(&n, 2, &f3).unwrap());
        assert_eq!(strict_p(&n, 2, &f3).unwrap(), 2);
        assert_eq!(
            strict_p(&Poly::parse("t^3", &f3).unwrap(), 2, &f3).unwrap(),
            2
        );
        assert_eq!(
            b_of(&Poly::parse("2*t^2+1", &f3).unwrap(), 2, &f3).unwrap(),
            f3.elem(2)
        );
        assert_eq!(
            b_of(&Poly::parse("t^3", &f3).unwrap(), 2, &f3).unwrap(),
            Fe::ZERO
        );
        assert!(strict_p(&Poly::zero(), 2, &f3).is_err());
    }

    #[test]
    fn j_infty_examples() {
        let f2 = f(2);
        for k in 1..5 {
            assert_eq!(j_infty(Fe::ZERO, k, 3, &f2).unwrap(), 3);
            assert_eq!(j_infty(Fe::ONE, k, 3, &f2).unwrap(), 4);
        }
        for q in [3, 4, 5] {
            assert_eq!(j_infty(Fe::ZERO, 2, 1, &f(q)).unwrap(), 0);
        }
    }

    #[test]
    fn count_examples() {
        let p =
            StrictProblem::with_box(inst(2, 2, 1), Poly::parse("t^2", &f(2)).unwrap(), 2).unwrap();
        assert_eq!(count_reps_bruteforce(&p, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(count_reps_mitm(&p, DEFAULT_BUDGET).unwrap(), 1);

        let f3 = f(3);
        let p =
            StrictProblem::with_box(inst(3, 2, 2), Poly::parse("t^2", &f3).unwrap(), 2).unwrap();
        // Only (±t, 0) and (0, ±t).
        let brute = count_reps_bruteforce(&p, DEFAULT_BUDGET).unwrap();
        assert_eq!(brute, 4);
        assert_eq!(brute, count_reps_mitm(&p, DEFAULT_BUDGET).unwrap());
        assert_eq!(brute, count_reps_quadrature(&p, DEFAULT_BUDGET).unwrap());

        let p0 = StrictProblem::with_box(inst(3, 3, 2), Poly::zero(), 2).unwrap();
        assert!(count_reps_bruteforce(&p0, DEFAULT_BUDGET).unwrap() >= 1);

        let f2 = f(2);
        let p =
            StrictProblem::with_box(inst(2, 3, 4), Poly::parse("t^3+t", &f2).unwrap(), 2).unwrap();
        assert_eq!(
            count_reps_bruteforce(&p, DEFAULT_BUDGET).unwrap(),
            count_reps_mitm(&p, DEFAULT_BUDGET).unwrap()
        );
        assert!(matches!(
            count_reps_bruteforce(&p, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rep_table_matches_mitm() {
        let f3 = f(3);
        let i = inst(3, 2, 3);
        let table = RepTable::new(&i, 2, 2, DEFAULT_BUDGET).unwrap();
        for n in all_below(&f3, 3) {
            let p = StrictProblem::with_box(i.clone(), n.clone(), 2).unwrap();
            assert_eq!(
                table.count(&n).unwrap(),
                count_reps_mitm(&p, DEFAULT_BUDGET).unwrap()
            );
        }
    }
}
