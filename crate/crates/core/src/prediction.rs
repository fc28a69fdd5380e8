//! The predicted main term `𝔖_{s,k}(n) J_∞(n) q^{(s−k)P}` and its comparison
//! with exact counts.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{all_below, count_below, Fe, Field, Poly};
use crate::counting::{
    b_of, count_reps_mitm, is_exceptional, j_infty, strict_p, witness_in_jqk_ring, RepTable,
    StrictProblem,
};
use crate::error::{Error, Result};
use crate::expsums::WaringInstance;

/// Largest imaginary part tolerated in a truncated singular series.
pub const IMAG_TOL: f64 = 1e-6;

/// Monic polynomials of degree exactly `d`.
pub fn monic_of_degree(f: &Field, d: u32) -> Vec<Poly> {
    all_below(f, d)
        .into_iter()
        .map(|r| r.add(&Poly::monomial(Fe::ONE, d as usize), f))
        .collect()
}

/// `res(b/g)` for monic `g` and `deg b < deg g`: the coefficient of
/// `t^{deg g − 1}` in `b`.
fn res_reduced(b: &Poly, dg: usize) -> Fe {
    b.coeff(dg - 1)
}

/// `S(g, a)^s` for every coprime residue `a`, cached per modulus.
#[derive(Clone, Debug)]
struct ModulusBlock {
    g: Poly,
    /// `(a, S(g, a)^s)` over `deg a < deg g`, `(a, g) = 1`.
    powers: Vec<(Poly, Complex64)>,
}

impl ModulusBlock {
    fn new(g: Poly, inst: &WaringInstance) -> Result<ModulusBlock> {
        let f = &inst.field;
        let dg = g.degree().expect("monic");
        let rk: Vec<Poly> = all_below(f, dg as u32)
            .iter()
            .map(|r| r.pow(inst.k, f).rem(&g, f))
            .collect::<Result<_>>()?;
        let mut powers = Vec::new();
        for a in all_below(f, dg as u32) {
            if a.is_zero() || a.gcd(&g, f) != Poly::one() {
                continue;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for r in &rk {
                let b = a.mul(r, f).rem(&g, f)?;
                sum += f.char_e_q(res_reduced(&b, dg));
            }
            powers.push((a, sum.powu(inst.s)));
        }
        Ok(ModulusBlock { g, powers })
    }

    /// `q^{−s deg g} Σ_a S(g, a)^s e(−na/g)`.
    fn term(&self, n: &Poly, inst: &WaringInstance) -> Result<Complex64> {
        let f = &inst.field;
        let dg = self.g.degree().unwrap();
        let nr = n.rem(&self.g, f)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, sp) in &self.powers {
            let b = a.mul(&nr, f).rem(&self.g, f)?;
            acc += sp * f.char_e_q(f.neg(res_reduced(&b, dg)));
        }
        Ok(acc * (f.q() as f64).powi(-((inst.s as usize * dg) as i32)))
    }
}

/// Gauss-sum powers for all monic moduli up to degree `G`, reusable
/// across targets `n`.
#[derive(Clone, Debug)]
pub struct SeriesCache {
    inst: WaringInstance,
    g_max: u32,
    blocks: Vec<Vec<ModulusBlock>>,
}

impl SeriesCache {
    /// Costs about `Σ_{d ≤ G} q^{3d}` residue operations.
    pub fn new(inst: &WaringInstance, g_max: u32, budget: u64) -> Result<SeriesCache> {
        let q = inst.q() as u128;
        let cost = (1..=g_max).try_fold(0u128, |acc, d| {
            q.checked_pow(3 * d).and_then(|c| acc.checked_add(c))
        });
        if cost.map_or(true, |c| c > budget as u128) {
            return Err(Error::BudgetExceeded {
                what: "singular series".into(),
                needed: cost.unwrap_or(u128::MAX),
                cap: budget,
            });
        }
        let f = &inst.field;
        let blocks = (1..=g_max)
            .map(|d| {
                monic_of_degree(f, d)
                    .into_par_iter()
                    .map(|g| ModulusBlock::new(g, inst))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(SeriesCache {
            inst: inst.clone(),
            g_max,
            blocks,
        })
    }

    pub fn g_max(&self) -> u32 {
        self.g_max
    }

    /// Cumulative partial sums `S_0, S_1, …, S_G`; `S_0 = 1`.
    pub fn partials(&self, n: &Poly) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(1.0, 0.0)];
        for blocks in &self.blocks {
            let terms = blocks
                .par_iter()
                .map(|b| b.term(n, &self.inst))
                .collect::<Result<Vec<_>>>()?;
            let layer: Complex64 = terms.iter().sum();
            out.push(out.last().unwrap() + layer);
        }
        Ok(out)
    }
}

/// The contribution of a single monic modulus `g` of positive degree.
pub fn singular_term(n: &Poly, inst: &WaringInstance, g: &Poly) -> Result<Complex64> {
    if !g.is_monic() || g.degree().unwrap_or(0) == 0 {
        return Err(Error::pre("g must be monic of positive degree"));
    }
    ModulusBlock::new(g.clone(), inst)?.term(n, inst)
}

/// The singular series truncated to `deg g ≤ G`, with the partial sum at
/// every level.
pub fn singular_series_truncated(
    n: &Poly,
    inst: &WaringInstance,
    g_max: u32,
    budget: u64,
) -> Result<Vec<Complex64>> {
    SeriesCache::new(inst, g_max, budget)?.partials(n)
}

fn require_real(partials: &[Complex64]) -> Result<()> {
    match partials.iter().find(|z| z.im.abs() >= IMAG_TOL) {
        Some(z) => Err(Error::InvariantViolation(format!(
            "truncated singular series has imaginary part {:e}",
            z.im
        ))),
        None => Ok(()),
    }
}

/// Main term from precomputed partials.
fn main_from(n: &Poly, inst: &WaringInstance, partials: &[Complex64]) -> Result<(f64, u128, u32)> {
    require_real(partials)?;
    let f = &inst.field;
    let s_re = partials.last().unwrap().re;
    if s_re < 0.0 {
        return Err(Error::NonConverged(s_re));
    }
    let p = strict_p(n, inst.k, f)?;
    let ji = j_infty(b_of(n, inst.k, f)?, inst.k, inst.s, f)?;
    let scale = (f.q() as f64).powi((inst.s as i32 - inst.k as i32) * p as i32);
    Ok((s_re * ji as f64 * scale, ji, p))
}

/// `Re 𝔖_G(n) · J_∞(n) · q^{(s−k)P}`.
pub fn main_term(n: &Poly, inst: &WaringInstance, g_max: u32, budget: u64) -> Result<f64> {
    require_nonzero(n)?;
    let partials = singular_series_truncated(n, inst, g_max, budget)?;
    Ok(main_from(n, inst, &partials)?.0)
}

fn require_nonzero(n: &Poly) -> Result<()> {
    if n.is_zero() {
        Err(Error::pre("n must be nonzero"))
    } else {
        Ok(())
    }
}

/// Real and imaginary parts of one partial sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

/// Exact count against prediction for one `n`.
#[derive(Clone, Debug, Serialize)]
pub struct PredictionReport {
    pub n: String,
    pub deg_n: u32,
    pub k: u32,
    pub s: u32,
    pub q: u32,
    #[serde(rename = "P")]
    pub p: u32,
    #[serde(rename = "G")]
    pub g: u32,
    pub exceptional: bool,
    pub singular_partial: Vec<ComplexJson>,
    /// `|S_G − S_{G−1}|`, absent for `G = 0`.
    pub stabilization: Option<f64>,
    pub j_infty: String,
    pub main_term: f64,
    pub exact_count: Option<String>,
    pub ratio: Option<f64>,
    pub discrepancy_scaled: Option<f64>,
}

impl PredictionReport {
    fn build(
        n: &Poly,
        inst: &WaringInstance,
        partials: &[Complex64],
        count: Option<u128>,
    ) -> Result<PredictionReport> {
        let f = &inst.field;
        let (main, ji, p) = main_from(n, inst, partials)?;
        let g = partials.len() as u32 - 1;
        let scale = (f.q() as f64).powi((inst.s as i32 - inst.k as i32) * p as i32);
        Ok(PredictionReport {
            n: n.display(f),
            deg_n: n.degree().unwrap() as u32,
            k: inst.k,
            s: inst.s,
            q: f.q(),
            p,
            g,
            exceptional: is_exceptional(n, inst.k, f)?,
            singular_partial: partials.iter().map(|&z| z.into()).collect(),
            stabilization: (g > 0)
                .then(|| (partials[g as usize] - partials[g as usize - 1]).norm()),
            j_infty: ji.to_string(),
            main_term: main,
            exact_count: count.map(|c| c.to_string()),
            ratio: count.filter(|_| main != 0.0).map(|c| c as f64 / main),
            discrepancy_scaled: count.map(|c| (c as f64 - main).abs() / scale),
        })
    }
}

/// Main term without an exact count.
pub fn predict_report(
    n: &Poly,
    inst: &WaringInstance,
    g_max: u32,
    budget: u64,
) -> Result<PredictionReport> {
    require_nonzero(n)?;
    let partials = singular_series_truncated(n, inst, g_max, budget)?;
    PredictionReport::build(n, inst, &partials, None)
}

/// Main term together with the exact count `R_{s,k}(n)`.
pub fn compare_report(
    n: &Poly,
    inst: &WaringInstance,
    g_max: u32,
    budget: u64,
) -> Result<PredictionReport> {
    require_nonzero(n)?;
    let partials = singular_series_truncated(n, inst, g_max, budget)?;
    let prob = StrictProblem::new(inst.clone(), n.clone())?;
    let count = count_reps_mitm(&prob, budget)?;
    PredictionReport::build(n, inst, &partials, Some(count))
}

/// The function `ψ` evaluated at `q^P`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Psi {
    /// `ψ(q^P) = P + 1`.
    PPlusOne,
    /// `ψ = ∞`: any nonzero discrepancy counts.
    Infinite,
    Constant(f64),
}

impl Psi {
    pub fn at(&self, p: u32) -> f64 {
        match *self {
            Psi::PPlusOne => p as f64 + 1.0,
            Psi::Infinite => f64::INFINITY,
            Psi::Constant(c) => c,
        }
    }
}

/// One scanned target.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub n: String,
    pub deg_n: u32,
    #[serde(rename = "P")]
    pub p: u32,
    pub count: String,
    pub main_term: f64,
    pub ratio: Option<f64>,
    pub discrepancy_scaled: f64,
    pub psi_value: f64,
    pub violator_flag: bool,
}

/// Column order for tabular scan output.
pub const SCAN_COLUMNS: [&str; 8] = [
    "n",
    "deg_n",
    "P",
    "count",
    "main_term",
    "ratio",
    "discrepancy_scaled",
    "violator_flag",
];

impl ScanRow {
    pub fn table_row(&self) -> Vec<String> {
        vec![
            self.n.clone(),
            self.deg_n.to_string(),
            self.p.to_string(),
            self.count.clone(),
            self.main_term.to_string(),
            self.ratio.map(|r| r.to_string()).unwrap_or_default(),
            self.discrepancy_scaled.to_string(),
            self.violator_flag.to_string(),
        ]
    }
}

/// Targets `n ∈ I_N` that violate `|R − main| > q^{(s−k)P} / ψ(q^P)`.
#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalScanReport {
    #[serde(rename = "N")]
    pub n_bound: u32,
    pub k: u32,
    pub s: u32,
    pub q: u32,
    #[serde(rename = "G")]
    pub g: u32,
    pub psi: Psi,
    pub scanned: usize,
    /// Targets skipped because no sum-of-powers witness was found.
    pub skipped: usize,
    pub rows: Vec<ScanRow>,
    pub violators: Vec<String>,
}

/// Scans every nonzero `n` with `deg n < N`. When `k ≥ p`, targets are kept
/// only if a representation as a sum of `k`-th powers is found.
pub fn exceptional_scan(
    n_bound: u32,
    inst: &WaringInstance,
    g_max: u32,
    psi: Psi,
    budget: u64,
) -> Result<ExceptionalScanReport> {
    let f = &inst.field;
    let total = count_below(f, n_bound)
        .filter(|&c| c <= budget as u128)
        .ok_or_else(|| Error::BudgetExceeded {
            what: "exceptional scan targets".into(),
            needed: count_below(f, n_bound).unwrap_or(u128::MAX),
            cap: budget,
        })?;
    let candidates: Vec<Poly> = (1..total).map(|i| Poly::from_index(i, f)).collect();
    scan(candidates, n_bound, inst, g_max, psi, budget)
}

/// [`exceptional_scan`] over an explicit list of nonzero targets; `N` is
/// reported as one more than the largest degree.
pub fn exceptional_scan_targets(
    targets: &[Poly],
    inst: &WaringInstance,
    g_max: u32,
    psi: Psi,
    budget: u64,
) -> Result<ExceptionalScanReport> {
    if targets.iter().any(|n| n.is_zero()) {
        return Err(Error::pre("n must be nonzero"));
    }
    let n_bound = targets
        .iter()
        .map(|n| n.deg_i64() as u32 + 1)
        .max()
        .unwrap_or(0);
    scan(targets.to_vec(), n_bound, inst, g_max, psi, budget)
}

fn scan(
    candidates: Vec<Poly>,
    n_bound: u32,
    inst: &WaringInstance,
    g_max: u32,
    psi: Psi,
    budget: u64,
) -> Result<ExceptionalScanReport> {
    let f = &inst.field;
    let cache = SeriesCache::new(inst, g_max, budget)?;
    let total = candidates.len();
    let kept: Vec<Poly> = if inst.k < inst.p() {
        candidates
    } else {
        let flags = candidates
            .par_iter()
            .map(|n| witness_in_jqk_ring(n, inst.k, f, budget).map(|w| w.is_some()))
            .collect::<Result<Vec<_>>>()?;
        candidates
            .into_iter()
            .zip(flags)
            .filter(|(_, ok)| *ok)
            .map(|(n, _)| n)
            .collect()
    };
    let skipped = total - kept.len();

    // One representation table per box size.
    let mut by_x: BTreeMap<u32, Vec<Poly>> = BTreeMap::new();
    for n in kept {
        by_x.entry(strict_p(&n, inst.k, f)? + 1)
            .or_default()
            .push(n);
    }
    let mut rows = Vec::new();
    for (x, ns) in by_x {
        let table = RepTable::new(inst, x, n_bound.saturating_sub(1), budget)?;
        let part = ns
            .par_iter()
            .map(|n| {
                let partials = cache.partials(n)?;
                let (main, _, p) = main_from(n, inst, &partials)?;
                let count = table.count(n)?;
                let scale = (f.q() as f64).powi((inst.s as i32 - inst.k as i32) * p as i32);
                let disc = (count as f64 - main).abs();
                let psi_value = psi.at(p);
                Ok(ScanRow {
                    n: n.display(f),
                    deg_n: n.degree().unwrap() as u32,
                    p,
                    count: count.to_string(),
                    main_term: main,
                    ratio: (main != 0.0).then(|| count as f64 / main),
                    discrepancy_scaled: disc / scale,
                    psi_value,
                    violator_flag: disc > scale / psi_value,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(part);
    }
    let index = |s: &ScanRow| Poly::parse(&s.n, f).map(|p| p.to_index(f.q())).unwrap_or(0);
    rows.sort_by_key(index);
    let violators = rows
        .iter()
        .filter(|r| r.violator_flag)
        .map(|r| r.n.clone())
        .collect();
    Ok(ExceptionalScanReport {
        n_bound,
        k: inst.k,
        s: inst.s,
        q: f.q(),
        g: g_max,
        psi,
        scanned: rows.len(),
        skipped,
        rows,
        violators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsums::{gauss_sum, res_of_ratio};

    fn inst(q: u32, k: u32, s: u32) -> WaringInstance {
        WaringInstance::new(Field::of_order(q).unwrap(), k, s).unwrap()
    }

    /// Direct summation with the general Gauss sum and residue routines.
    fn oracle(n: &Poly, inst: &WaringInstance, g_max: u32) -> Vec<Complex64> {
        let f = &inst.field;
        let mut out = vec![Complex64::new(1.0, 0.0)];
        for d in 1..=g_max {
            let mut layer = Complex64::new(0.0, 0.0);
            for g in monic_of_degree(f, d) {
                for a in all_below(f, d) {
                    if a.is_zero() || a.gcd(&g, f) != Poly::one() {
                        continue;
                    }
                    let sg = gauss_sum(&a, &g, inst.k, f).unwrap();
                    let na = n.mul(&a, f).neg(f);
                    let e = f.char_e_q(res_of_ratio(&na, &g, f).unwrap());
                    layer += sg.powu(inst.s) * e / (f.q() as f64).powi((inst.s * d) as i32);
                }
            }
            out.push(out.last().unwrap() + layer);
        }
        out
    }

    #[test]
    fn series_matches_direct_summation() {
        for (q, k, s, n) in [(3, 2, 5, "t^2"), (2, 3, 4, "t^3+t"), (4, 3, 7, "t^3+1")] {
            let inst = inst(q, k, s);
            let n = Poly::parse(n, &inst.field).unwrap();
            let got = singular_series_truncated(&n, &inst, 2, 1 << 30).unwrap();
            let want = oracle(&n, &inst, 2);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).norm() < 1e-9, "{a} vs {b}");
            }
            assert!(got.iter().all(|z| z.im.abs() < IMAG_TOL));
        }
    }

    #[test]
    fn level_zero_is_one() {
        let inst = inst(3, 2, 5);
        let n = Poly::parse("t^2+2", &inst.field).unwrap();
        assert_eq!(
            singular_series_truncated(&n, &inst, 0, 10).unwrap(),
            vec![Complex64::new(1.0, 0.0)]
        );
        let main = main_term(&n, &inst, 0, 10).unwrap();
        let ji = j_infty(Fe::ONE, 2, 5, &inst.field).unwrap();
        assert_eq!(main, ji as f64 * 27.0);
    }

    #[test]
    fn multiplicative_over_coprime_moduli() {
        for (q, k, s, n) in [(3, 2, 5, "t^2+1"), (2, 3, 5, "t^3"), (2, 2, 5, "t+1")] {
            let inst = inst(q, k, s);
            let f = &inst.field;
            let n = Poly::parse(n, f).unwrap();
            let g1 = Poly::t();
            let g2 = Poly::parse("t+1", f).unwrap();
            let whole = singular_term(&n, &inst, &g1.mul(&g2, f)).unwrap();
            let parts =
                singular_term(&n, &inst, &g1).unwrap() * singular_term(&n, &inst, &g2).unwrap();
            assert!((whole - parts).norm() < 1e-9, "{whole} vs {parts}");
        }
    }

    #[test]
    fn zero_target_rejected() {
        let inst = inst(3, 2, 5);
        assert!(compare_report(&Poly::zero(), &inst, 1, 1000).is_err());
    }

    #[test]
    fn scan_with_infinite_psi_flags_every_mismatch() {
        let inst = inst(3, 2, 5);
        let rep = exceptional_scan(3, &inst, 1, Psi::Infinite, 1 << 24).unwrap();
        assert_eq!(rep.scanned, 26);
        for r in &rep.rows {
            assert_eq!(r.violator_flag, r.discrepancy_scaled > 0.0);
        }
    }
}
