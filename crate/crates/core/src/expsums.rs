//! Exponential sums over boxes `I_X` and complete residue systems.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{all_below, det_sum, laurent_of_ratio, Fe, Field, Laurent, Poly};
use crate::error::{Error, Result};

/// `(F_q, k, s)`: the data fixing one Waring problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaringInstance {
    pub field: Field,
    pub k: u32,
    pub s: u32,
}

impl WaringInstance {
    pub fn new(field: Field, k: u32, s: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::pre(format!("k must be at least 2, got {k}")));
        }
        if s < 1 {
            return Err(Error::pre("s must be at least 1"));
        }
        Ok(WaringInstance { field, k, s })
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// Fails unless `p ∤ k`, for operations whose theory needs it.
    pub fn require_p_coprime_k(&self) -> Result<()> {
        if self.k % self.p() == 0 {
            return Err(Error::pre(format!(
                "p = {} divides k = {}",
                self.p(),
                self.k
            )));
        }
        Ok(())
    }
}

/// How deep an argument's window must reach so that `res(α x^j)` is fixed
/// for every `x ∈ I_X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SumWindowReq {
    pub x: u32,
    pub needed_depth: i64,
}

impl SumWindowReq {
    pub fn for_power(j: u32, x: u32) -> SumWindowReq {
        let needed_depth = -(j as i64) * (x as i64 - 1).max(0) - 1;
        SumWindowReq { x, needed_depth }
    }

    pub fn check(&self, a: &Laurent) -> Result<()> {
        a.require_depth(self.needed_depth)
    }
}

/// The `k`-th powers of every element of `I_X`, in enumeration order.
#[derive(Clone, Debug)]
pub struct PowerTable {
    field: Field,
    k: u32,
    x: u32,
    powers: Vec<Poly>,
}

impl PowerTable {
    pub fn new(field: &Field, k: u32, x: u32) -> PowerTable {
        let powers = all_below(field, x)
            .iter()
            .map(|p| p.pow(k, field))
            .collect();
        PowerTable {
            field: field.clone(),
            k,
            x,
            powers,
        }
    }

    pub fn powers(&self) -> &[Poly] {
        &self.powers
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    /// `g(α) = Σ_{x∈I_X} e(α x^k)`, summed sequentially.
    pub fn weyl_sum(&self, alpha: &Laurent) -> Result<Complex64> {
        SumWindowReq::for_power(self.k, self.x).check(alpha)?;
        let f = &self.field;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.powers {
            acc += f.char_e_q(alpha.res_of_poly_product(p, f)?);
        }
        Ok(acc)
    }
}

/// `g(α) = Σ_{x∈I_X} e(α x^k)`.
pub fn weyl_sum_g(alpha: &Laurent, x: u32, k: u32, f: &Field) -> Result<Complex64> {
    SumWindowReq::for_power(k, x).check(alpha)?;
    let n = f.q() as u64;
    let n = n.pow(x);
    let total = det_sum(n, |i| {
        let p = Poly::from_index(i as u128, f).pow(k, f);
        f.char_e_q(alpha.res_of_poly_product(&p, f).unwrap())
    });
    Ok(total)
}

/// `Σ_{deg x ≤ Y} e(βx)` by direct summation.
pub fn linear_sum(beta: &Laurent, y: u32, f: &Field) -> Result<Complex64> {
    beta.require_depth(-(y as i64) - 1)?;
    let n = (f.q() as u64).pow(y + 1);
    Ok(det_sum(n, |i| {
        let x = Poly::from_index(i as u128, f);
        f.char_e_q(beta.res_of_poly_product(&x, f).unwrap())
    }))
}

/// The two-case evaluation of [`linear_sum`]: `q^{Y+1}` when the
/// coefficients of `β` at `t^{-1} .. t^{-Y-1}` all vanish, and `0` otherwise.
pub fn linear_sum_closed(beta: &Laurent, y: u32, f: &Field) -> Result<u128> {
    beta.require_depth(-(y as i64) - 1)?;
    for e in 1..=(y as i64 + 1) {
        if !beta.coeff(-e)?.is_zero() {
            return Ok(0);
        }
    }
    Ok((f.q() as u128).pow(y + 1))
}

/// `f(α⃗) = Σ_{x∈I_X} e(Σ_j α_j x^j)` over the exponents present in `coeffs`.
pub fn multi_sum_f(coeffs: &BTreeMap<u32, Laurent>, x: u32, f: &Field) -> Result<Complex64> {
    for (&j, a) in coeffs {
        SumWindowReq::for_power(j, x).check(a)?;
    }
    let n = (f.q() as u64).pow(x);
    let slots: Vec<(u32, &Laurent)> = coeffs.iter().map(|(&j, a)| (j, a)).collect();
    Ok(det_sum(n, |i| {
        let p = Poly::from_index(i as u128, f);
        let mut r = Fe::ZERO;
        for &(j, a) in &slots {
            r = f.add(r, a.res_of_poly_product(&p.pow(j, f), f).unwrap());
        }
        f.char_e_q(r)
    }))
}

/// `F(β⃗, θ) = Σ_{x∈I_X} e(Σ_{j<r-1} β_{t_j} x^{t_j} + θ x^k)`.
///
/// `exponents` is the sorted list `t_1 < ... < t_r` with `t_r = k`; the keys
/// of `beta` must lie among `t_1 .. t_{r-2}`.
pub fn sum_big_f(
    beta: &BTreeMap<u32, Laurent>,
    theta: &Laurent,
    exponents: &[u32],
    x: u32,
    f: &Field,
) -> Result<Complex64> {
    let r = exponents.len();
    if r < 2 {
        return Err(Error::pre("exponent list needs at least t_{r-1} and t_r"));
    }
    let allowed = &exponents[..r - 2];
    if let Some(j) = beta.keys().find(|j| !allowed.contains(j)) {
        return Err(Error::pre(format!(
            "slot {j} is not among t_1..t_(r-2) = {allowed:?}"
        )));
    }
    let mut all = beta.clone();
    all.insert(exponents[r - 1], theta.clone());
    multi_sum_f(&all, x, f)
}

/// `ψ(θ, α) = q^{-X} Σ_{y∈I_X} Σ_{deg h ≤ j_0(X-1)} e(-c h y^{k-j_0} θ - α h)`.
///
/// Each inner sum is a linear sum in `h`, so it is either `q^{j_0(X-1)+1}` or
/// zero; the result is therefore real and nonnegative.
pub fn psi_sum(
    theta: &Laurent,
    alpha: &Laurent,
    c: Fe,
    k: u32,
    j0: u32,
    x: u32,
    f: &Field,
) -> Result<f64> {
    if c.is_zero() {
        return Err(Error::pre("c must be nonzero"));
    }
    if j0 == 0 || j0 >= k {
        return Err(Error::pre(format!("j0 = {j0} must lie in 1..k")));
    }
    if x == 0 {
        return Err(Error::pre("X must be at least 1"));
    }
    let y_deg = j0 * (x - 1);
    theta.require_depth(-(k as i64) * (x as i64 - 1) - 1)?;
    alpha.require_depth(-(y_deg as i64) - 1)?;
    let mut hits: u64 = 0;
    for y in all_below(f, x) {
        let beta = theta
            .mul_poly(&y.pow(k - j0, f), f)
            .scale(c, f)
            .add(alpha, f)
            .neg(f);
        if linear_sum_closed(&beta, y_deg, f)? != 0 {
            hits += 1;
        }
    }
    let q = f.q() as f64;
    Ok(hits as f64 * q.powi(y_deg as i32 + 1 - x as i32))
}

/// `res(b/g)` for a polynomial `b` and nonzero `g`.
pub fn res_of_ratio(b: &Poly, g: &Poly, f: &Field) -> Result<Fe> {
    laurent_of_ratio(b, g, -1, f)?.res()
}

/// The complete sum `S(g, a) = Σ_{deg r < deg g} e(a r^k / g)`.
pub fn gauss_sum(a: &Poly, g: &Poly, k: u32, f: &Field) -> Result<Complex64> {
    let dg = g.degree().ok_or(Error::DivisionByZero)?;
    if dg < 1 {
        return Err(Error::pre("g must have degree at least 1"));
    }
    if !g.is_monic() {
        return Err(Error::pre("g must be monic"));
    }
    if a.deg_i64() >= dg as i64 {
        return Err(Error::pre("deg a must be below deg g"));
    }
    if a.gcd(g, f) != Poly::one() {
        return Err(Error::pre("a and g must be coprime"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for r in all_below(f, dg as u32) {
        let b = a.mul(&r.pow(k, f), f).rem(g, f)?;
        acc += f.char_e_q(res_of_ratio(&b, g, f)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn f(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    fn t_pow(e: i64, depth: i64, f: &Field) -> Laurent {
        Laurent::from_terms(&[(e, Fe::ONE)], depth, f)
    }

    #[test]
    fn weyl_sum_examples() {
        let f3 = f(3);
        let g = weyl_sum_g(&Laurent::zero(-10), 2, 3, &f3).unwrap();
        assert!((g - 9.0).norm() < 1e-9);
        let g = weyl_sum_g(&t_pow(-1, -1, &f3), 1, 2, &f3).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((g - (1.0 + 2.0 * w)).norm() < 1e-9);
        assert!((g.norm() - 3f64.sqrt()).abs() < 1e-9);
        // Everything below the reach of x^k contributes nothing.
        let f2 = f(2);
        let deep = t_pow(-5, -8, &f2);
        assert!((weyl_sum_g(&deep, 2, 3, &f2).unwrap() - 4.0).norm() < 1e-9);
        assert!(weyl_sum_g(&Laurent::zero(-2), 2, 3, &f2).is_err());
    }

    #[test]
    fn linear_sum_examples() {
        let f2 = f(2);
        let b = t_pow(-3, -5, &f2);
        assert!((linear_sum(&b, 1, &f2).unwrap() - 4.0).norm() < 1e-9);
        let f3 = f(3);
        assert!(linear_sum(&t_pow(-1, -3, &f3), 1, &f3).unwrap().norm() < 1e-9);
        assert_eq!(linear_sum_closed(&Laurent::zero(-3), 2, &f3).unwrap(), 27);
    }

    #[test]
    fn multi_sum_examples() {
        let f2 = f(2);
        let mut m = BTreeMap::new();
        m.insert(1, t_pow(-1, -1, &f2));
        m.insert(3, t_pow(-1, -1, &f2));
        assert!((multi_sum_f(&m, 1, &f2).unwrap() - 2.0).norm() < 1e-9);
        let zero: BTreeMap<u32, Laurent> = [(1, Laurent::zero(-9)), (3, Laurent::zero(-9))].into();
        assert!((multi_sum_f(&zero, 3, &f2).unwrap() - 8.0).norm() < 1e-9);
    }

    #[test]
    fn big_f_examples() {
        let f3 = f(3);
        let theta = Laurent::zero(-5);
        let beta: BTreeMap<u32, Laurent> = [(1, t_pow(-1, -1, &f3))].into();
        let v = sum_big_f(&beta, &theta, &[1, 2, 4], 1, &f3).unwrap();
        assert!(v.norm() < 1e-9);
        let v = sum_big_f(&BTreeMap::new(), &theta, &[1, 4], 1, &f3).unwrap();
        assert!((v - 3.0).norm() < 1e-9);
        assert!(sum_big_f(&[(2, theta.clone())].into(), &theta, &[1, 2, 4], 1, &f3).is_err());
    }

    #[test]
    fn gauss_sum_examples() {
        let f3 = f(3);
        let s = gauss_sum(&Poly::one(), &Poly::t(), 2, &f3).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((s - (1.0 + 2.0 * w)).norm() < 1e-9);
        for q in [2, 3, 4, 5] {
            let fq = f(q);
            assert!(gauss_sum(&Poly::one(), &Poly::t(), 1, &fq).unwrap().norm() < 1e-9);
        }
        let f2 = f(2);
        for k in 1..6 {
            assert!(gauss_sum(&Poly::one(), &Poly::t(), k, &f2).unwrap().norm() < 1e-9);
        }
        let g = Poly::from_ints(&f3, &[0, 2]);
        assert!(gauss_sum(&Poly::one(), &g, 2, &f3).is_err());
        assert!(gauss_sum(&Poly::t(), &Poly::t(), 2, &f3).is_err());
        assert!(gauss_sum(&Poly::one(), &Poly::one(), 2, &f3).is_err());
    }

    #[test]
    fn psi_trivial_values() {
        let f3 = f(3);
        let v = psi_sum(
            &Laurent::zero(-10),
            &Laurent::zero(-10),
            Fe::ONE,
            3,
            2,
            2,
            &f3,
        )
        .unwrap();
        assert!((v - 27.0).abs() < 1e-9);
        assert!(psi_sum(
            &Laurent::zero(-3),
            &Laurent::zero(-10),
            Fe::ONE,
            3,
            2,
            2,
            &f3
        )
        .is_err());
    }
}
