//! Exact integration over `𝕋` for integrands that only see finitely many
//! fractional coefficients.

use num_complex::Complex64;
use rayon::prelude::*;

use super::field::Field;
use super::laurent::Laurent;
use crate::error::{Error, Result};

/// Points handled sequentially per work unit. Fixed so that the summation
/// tree, and hence the floating-point result, does not depend on the
/// number of threads.
const CHUNK: u64 = 1 << 12;

/// The default residual guard for [`round_to_integer`].
pub const INTEGER_TOL: f64 = 1e-6;

/// `∫_𝕋 f(α) dα` as the average of `f` over the `q^M` points
/// `α = Σ_{i=1}^{M} c_i t^{-i}`.
///
/// Exact whenever `f` is a combination of characters `e(hα)` with
/// `deg h < M`; the caller is responsible for choosing `M`.
pub fn quadrature_t<F>(field: &Field, m: u32, f: F) -> Result<Complex64>
where
    F: Fn(&Laurent) -> Complex64 + Sync,
{
    let q = field.q() as u64;
    let n = q.checked_pow(m).ok_or_else(|| Error::BudgetExceeded {
        what: "quadrature".into(),
        needed: u128::MAX,
        cap: u64::MAX,
    })?;
    let total = det_sum(n, |idx| {
        let mut digits = Vec::with_capacity(m as usize);
        let mut v = idx;
        for _ in 0..m {
            digits.push(field.elem((v % q) as usize));
            v /= q;
        }
        f(&Laurent::from_frac_digits(&digits))
    });
    Ok(total / n as f64)
}

/// `Σ_{i<n} f(i)` computed in parallel with a fixed summation tree.
pub fn det_sum<F>(n: u64, f: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<Complex64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                acc += f(i);
            }
            acc
        })
        .collect();
    partial.into_iter().sum()
}

/// Rounds a value that is known to be an integer up to floating error,
/// failing if the residual exceeds `tol` or the imaginary part is not small.
pub fn round_to_integer(z: Complex64, tol: f64) -> Result<i128> {
    let r = z.re.round();
    let resid = ((z.re - r).powi(2) + z.im.powi(2)).sqrt();
    if resid >= tol || !r.is_finite() {
        return Err(Error::NotIntegral { value: z.re, tol });
    }
    Ok(r as i128)
}
