//! Farey arcs on `𝕋`: Dirichlet approximation, major/minor classification,
//! center enumeration and arc measure.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{all_below, laurent_of_rational, Fe, Field, Laurent, Poly, RationalFn};
use crate::error::{Error, Result};
use crate::expsums::PowerTable;

/// Arc scale: `R_k = (k-1) X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArcParams {
    pub k: u32,
    pub x: u32,
    pub r_k: u32,
}

impl ArcParams {
    pub fn new(k: u32, x: u32) -> Result<ArcParams> {
        if k < 2 {
            return Err(Error::pre(format!("k must be at least 2, got {k}")));
        }
        Ok(ArcParams {
            k,
            x,
            r_k: (k - 1) * x,
        })
    }

    /// Depth a window must reach before [`classify`] accepts it.
    pub fn classify_depth(&self) -> i64 {
        -((self.r_k + self.x + 1) as i64)
    }
}

/// A reduced fraction `a/g`, `g` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcCenter {
    pub a: Poly,
    pub g: Poly,
}

impl ArcCenter {
    pub fn origin() -> ArcCenter {
        ArcCenter {
            a: Poly::zero(),
            g: Poly::one(),
        }
    }

    pub fn deg_g(&self) -> u32 {
        self.g.degree().unwrap_or(0) as u32
    }

    pub fn display(&self, f: &Field) -> String {
        format!("{}/({})", self.a.display(f), self.g.display(f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcClass {
    Major(ArcCenter),
    Minor,
}

impl ArcClass {
    pub fn is_major(&self) -> bool {
        matches!(self, ArcClass::Major(_))
    }
}

impl fmt::Display for ArcClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcClass::Major(c) => write!(f, "major(deg g = {})", c.deg_g()),
            ArcClass::Minor => write!(f, "minor"),
        }
    }
}

/// The polynomial `Σ_{i=1}^{l} c_i t^{l-i}` built from the first `l`
/// fractional digits, so that the truncation of `α` is this over `t^l`.
fn truncated_numerator(alpha: &Laurent, l: u32) -> Result<Poly> {
    let v = (0..l as i64)
        .map(|j| alpha.coeff(j - l as i64))
        .collect::<Result<Vec<Fe>>>()?;
    Ok(Poly::from_coeffs(v))
}

/// Last continued-fraction convergent `a/g` of `num/t^l` with `deg g <= bound`,
/// normalised so that `g` is monic.
fn last_convergent(num: &Poly, l: u32, bound: u32, f: &Field) -> ArcCenter {
    let mut x = num.clone();
    let mut y = Poly::monomial(Fe::ONE, l as usize);
    // The leading partial quotient of a proper fraction is zero.
    let (mut p_prev, mut p) = (Poly::one(), Poly::zero());
    let (mut q_prev, mut q) = (Poly::zero(), Poly::one());
    std::mem::swap(&mut x, &mut y);
    while !y.is_zero() {
        let (a, r) = x.divmod(&y, f).expect("y is nonzero");
        let p_next = a.mul(&p, f).add(&p_prev, f);
        let q_next = a.mul(&q, f).add(&q_prev, f);
        if q_next.deg_i64() > bound as i64 {
            break;
        }
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        x = std::mem::replace(&mut y, r);
    }
    let c = f
        .inv(q.lead())
        .expect("convergent denominators are nonzero");
    ArcCenter {
        a: p.scale(c, f),
        g: q.scale(c, f),
    }
}

/// Decides `ord(gα - a) < -R`, i.e. `α ∈ 𝔐(g, a)` at scale `R`.
fn in_arc(alpha: &Laurent, c: &ArcCenter, r: u32, f: &Field) -> Result<bool> {
    let ga = alpha.mul_poly(&c.g, f);
    Ok(ga.int_part()? == c.a && ga.frac_part().ord_lt(-(r as i64))?)
}

/// Finds `a/g` with `g` monic, `deg g <= R`, `(a, g) = 1` and
/// `ord(gα - a) < -R`, by continued fractions.
///
/// Only the fractional part of `α` matters; its window must reach `t^{-2R}`.
pub fn dirichlet_approx(alpha: &Laurent, r: u32, f: &Field) -> Result<ArcCenter> {
    let l = 2 * r;
    alpha.require_depth(-(l as i64))?;
    let frac = alpha.frac_part();
    let num = truncated_numerator(&frac, l)?;
    let c = last_convergent(&num, l, r, f);
    if !in_arc(&frac, &c, r, f)? {
        return Err(Error::InvariantViolation(format!(
            "Dirichlet certificate failed for {} at R = {r}",
            c.display(f)
        )));
    }
    Ok(c)
}

/// [`dirichlet_approx`] for an exactly known rational input.
pub fn dirichlet_approx_rational(alpha: &RationalFn, r: u32, f: &Field) -> Result<ArcCenter> {
    let w = laurent_of_rational(alpha, -(2 * r as i64) - 1, f)?;
    dirichlet_approx(&w, r, f)
}

/// Major/minor classification at scale `R_k = (k-1)X`.
///
/// If `α ∈ 𝔐_k(g, a)` with `deg g <= X` then `a/g` is the last convergent of
/// the `2X+1`-digit truncation of `α` with denominator degree `<= X`, so only
/// that one candidate needs testing.
pub fn classify(alpha: &Laurent, params: &ArcParams, f: &Field) -> Result<ArcClass> {
    alpha.require_depth(params.classify_depth())?;
    let frac = alpha.frac_part();
    let l = 2 * params.x + 1;
    let num = truncated_numerator(&frac, l)?;
    let c = last_convergent(&num, l, params.x, f);
    if in_arc(&frac, &c, params.r_k, f)? {
        Ok(ArcClass::Major(c))
    } else {
        Ok(ArcClass::Minor)
    }
}

/// Every center `(a, g)` with `g` monic, `1 <= deg g <= X`, `deg a < deg g`,
/// `(a, g) = 1`, preceded by the origin center `(0, 1)`.
pub fn enumerate_major_centers(params: &ArcParams, f: &Field) -> Vec<ArcCenter> {
    let mut out = vec![ArcCenter::origin()];
    for d in 1..=params.x {
        let lead = Poly::monomial(Fe::ONE, d as usize);
        let residues = all_below(f, d);
        for low in &residues {
            let g = lead.add(low, f);
            for a in residues.iter().filter(|a| !a.is_zero()) {
                if a.gcd(&g, f) == Poly::one() {
                    out.push(ArcCenter {
                        a: a.clone(),
                        g: g.clone(),
                    });
                }
            }
        }
    }
    out
}

/// Number of centers with `deg g = d`: `q^{2d-1}(q-1)` for `d >= 1`.
pub fn centers_of_degree(q: u32, d: u32) -> BigInt {
    if d == 0 {
        return BigInt::one();
    }
    let q = BigInt::from(q);
    num_traits::pow(q.clone(), (2 * d - 1) as usize) * (q - 1)
}

/// Haar measure `Σ_centers q^{-R_k - deg g}` of the major arcs, exact.
///
/// Arcs with `deg g <= R_k` are pairwise disjoint, and `X <= R_k` for every
/// `k >= 2`, so the sum is the measure of the union.
pub fn major_measure(params: &ArcParams, q: u32) -> BigRational {
    let qb = BigInt::from(q);
    let mut total = BigRational::zero();
    for d in 0..=params.x {
        let den = num_traits::pow(qb.clone(), (params.r_k + d) as usize);
        total += BigRational::new(centers_of_degree(q, d), den);
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterJson {
    pub a: String,
    pub g: String,
}

/// One serialised arc: its center and measure `measure_num / measure_den`.
#[derive(Clone, Debug, Serialize)]
pub struct ArcReport {
    pub center: CenterJson,
    pub measure_num: String,
    pub measure_den: String,
}

pub fn arc_reports(params: &ArcParams, f: &Field) -> Vec<ArcReport> {
    let qb = BigInt::from(f.q());
    enumerate_major_centers(params, f)
        .into_iter()
        .map(|c| {
            let den = num_traits::pow(qb.clone(), (params.r_k + c.deg_g()) as usize);
            ArcReport {
                center: CenterJson {
                    a: c.a.display(f),
                    g: c.g.display(f),
                },
                measure_num: "1".into(),
                measure_den: den.to_string(),
            }
        })
        .collect()
}

/// Result of scanning `|g(θ)|` over minor-arc windows.
#[derive(Clone, Debug, Serialize)]
pub struct MinorScanReport {
    pub q: u32,
    pub k: u32,
    pub x: u32,
    /// Number of fractional digits fixed per window.
    pub window_digits: u32,
    pub exhaustive: bool,
    pub windows_examined: u64,
    pub minor_windows: u64,
    pub max_abs_g: Option<f64>,
    pub trivial_bound: f64,
    /// `q^{X - X/(16(p^b+2))}`, reported when `k = p^b + 1`.
    pub savings_bound: Option<f64>,
    pub seed: u64,
}

fn power_plus_one(k: u32, p: u32) -> Option<u32> {
    let mut pb = p;
    while pb + 1 < k {
        pb *= p;
    }
    (pb + 1 == k).then_some(pb)
}

/// Scans `|g(θ)|` over minor-arc windows of depth `kX + 1`.
///
/// All `q^{kX+1}` windows are visited when that count fits in `budget`;
/// otherwise `budget` windows are drawn uniformly with a seeded generator
/// and major hits are discarded. Nothing is asserted about the bound.
pub fn sup_minor_scan(
    f: &Field,
    k: u32,
    x: u32,
    budget: u64,
    seed: u64,
) -> Result<MinorScanReport> {
    let params = ArcParams::new(k, x)?;
    let digits = (-params.classify_depth()) as u32;
    let q = f.q() as f64;
    let savings_bound =
        power_plus_one(k, f.p()).map(|pb| q.powf(x as f64 - x as f64 / (16.0 * (pb as f64 + 2.0))));
    let mut report = MinorScanReport {
        q: f.q(),
        k,
        x,
        window_digits: digits,
        exhaustive: true,
        windows_examined: 0,
        minor_windows: 0,
        max_abs_g: None,
        trivial_bound: q.powi(x as i32),
        savings_bound,
        seed,
    };
    if k == 2 {
        // Every point is within a major arc.
        return Ok(report);
    }
    let total = (f.q() as u64).checked_pow(digits);
    let exhaustive = total.is_some_and(|n| n <= budget);
    let n = if exhaustive { total.unwrap() } else { budget };
    let table = PowerTable::new(f, k, x);
    let qn = f.q() as u64;

    let window = |i: u64| -> Laurent {
        let d: Vec<Fe> = if exhaustive {
            let mut v = i;
            (0..digits)
                .map(|_| {
                    let c = f.elem((v % qn) as usize);
                    v /= qn;
                    c
                })
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            (0..digits)
                .map(|_| f.elem(rng.gen_range(0..qn) as usize))
                .collect()
        };
        Laurent::from_frac_digits(&d)
    };

    let (minor, max) = (0..n)
        .into_par_iter()
        .map(|i| -> Result<(u64, Option<f64>)> {
            let theta = window(i);
            match classify(&theta, &params, f)? {
                ArcClass::Major(_) => Ok((0, None)),
                ArcClass::Minor => Ok((1, Some(table.weyl_sum(&theta)?.norm()))),
            }
        })
        .try_reduce(
            || (0, None),
            |a, b| {
                let m = match (a.1, b.1) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                };
                Ok((a.0 + b.0, m))
            },
        )?;
    report.exhaustive = exhaustive;
    report.windows_examined = n;
    report.minor_windows = minor;
    report.max_abs_g = max;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn dirichlet_examples() {
        let f3 = f(3);
        let one_over_t = Laurent::from_terms(&[(-1, Fe::ONE)], -4, &f3);
        let c = dirichlet_approx(&one_over_t, 2, &f3).unwrap();
        assert_eq!(
            c,
            ArcCenter {
                a: Poly::one(),
                g: Poly::t()
            }
        );
        assert_eq!(
            dirichlet_approx(&Laurent::zero(-4), 2, &f3).unwrap(),
            ArcCenter::origin()
        );

        let a = Poly::parse("t+1", &f3).unwrap();
        let g = Poly::parse("t^2+2", &f3).unwrap();
        let r = RationalFn::new(a.clone(), g.clone(), &f3).unwrap();
        let c = dirichlet_approx_rational(&r, 2, &f3).unwrap();
        // t^2 + 2 = (t + 1)(t + 2) over F_3, so the fraction reduces to 1/(t + 2).
        assert_eq!(
            c,
            ArcCenter {
                a: Poly::one(),
                g: Poly::parse("t+2", &f3).unwrap()
            }
        );
        assert_eq!(c.a.mul(&g, &f3), a.mul(&c.g, &f3));
        assert!(dirichlet_approx(&Laurent::zero(-3), 2, &f3).is_err());
    }

    #[test]
    fn classify_examples() {
        let f2 = f(2);
        let p = ArcParams::new(3, 2).unwrap();
        let alpha = Laurent::from_terms(&[(-1, Fe::ONE), (-7, Fe::ONE)], -7, &f2);
        assert_eq!(
            classify(&alpha, &p, &f2).unwrap(),
            ArcClass::Major(ArcCenter {
                a: Poly::one(),
                g: Poly::t()
            })
        );
        // 1/(t^3+t+1) has a degree-3 denominator: minor at X = 2.
        let g3 = Poly::parse("t^3+t+1", &f2).unwrap();
        let w = crate::algebra::laurent_of_ratio(&Poly::one(), &g3, -7, &f2).unwrap();
        assert_eq!(classify(&w, &p, &f2).unwrap(), ArcClass::Minor);
        assert!(classify(&Laurent::zero(-6), &p, &f2).is_err());
        let p2 = ArcParams::new(2, 2).unwrap();
        for i in 0..32u32 {
            let d: Vec<Fe> = (0..5).map(|b| f2.elem(((i >> b) & 1) as usize)).collect();
            assert!(classify(&Laurent::from_frac_digits(&d), &p2, &f2)
                .unwrap()
                .is_major());
        }
    }

    #[test]
    fn center_counts_and_measure() {
        let f2 = f(2);
        let f3 = f(3);
        assert_eq!(
            enumerate_major_centers(&ArcParams::new(3, 1).unwrap(), &f2).len(),
            3
        );
        assert_eq!(
            enumerate_major_centers(&ArcParams::new(3, 1).unwrap(), &f3).len(),
            7
        );
        assert_eq!(
            enumerate_major_centers(&ArcParams::new(3, 0).unwrap(), &f3).len(),
            1
        );
        for (q, x) in [(2, 3), (3, 2), (4, 2)] {
            let fq = f(q);
            let p = ArcParams::new(3, x).unwrap();
            let cs = enumerate_major_centers(&p, &fq);
            for d in 0..=x {
                let n = cs.iter().filter(|c| c.deg_g() == d).count();
                assert_eq!(BigInt::from(n), centers_of_degree(q, d));
            }
        }
        let m = major_measure(&ArcParams::new(3, 1).unwrap(), 2);
        assert_eq!(m, BigRational::new(1.into(), 2.into()));
        let m0 = major_measure(&ArcParams::new(3, 0).unwrap(), 5);
        assert_eq!(m0, BigRational::new(1.into(), 1.into()));
    }

    #[test]
    fn minor_scan_shapes() {
        let f2 = f(2);
        let r = sup_minor_scan(&f2, 2, 3, 1000, 1).unwrap();
        assert_eq!(r.minor_windows, 0);
        assert!(r.max_abs_g.is_none());
        let r = sup_minor_scan(&f2, 3, 2, 1 << 20, 1).unwrap();
        assert!(r.exhaustive);
        assert!(r.max_abs_g.unwrap() <= 4.0 + 1e-9);
        let r = sup_minor_scan(&f2, 3, 3, 1 << 20, 1).unwrap();
        let b = r.savings_bound.unwrap();
        assert!((b - 2f64.powf(3.0 - 3.0 / 64.0)).abs() < 1e-12);
        let sampled = sup_minor_scan(&f2, 3, 3, 200, 9).unwrap();
        assert!(!sampled.exhaustive);
        let again = sup_minor_scan(&f2, 3, 3, 200, 9).unwrap();
        assert_eq!(sampled.minor_windows, again.minor_windows);
        assert_eq!(sampled.max_abs_g, again.max_abs_g);
    }
}
