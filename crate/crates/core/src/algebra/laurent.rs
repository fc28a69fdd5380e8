//! Finite windows of Laurent series in `1/t`, i.e. elements of `F_q((1/t))`
//! known exactly from some exponent `depth` upward.
//!
//! Coefficients below `depth` are unknown, not zero. Every read that would
//! touch them fails with [`Error::WindowTooShallow`].

use num_complex::Complex64;

use super::field::{Fe, Field};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent {
    depth: i64,
    /// `coeffs[i]` is the coefficient of `t^(depth + i)`; no trailing zeros.
    coeffs: Vec<Fe>,
}

impl Laurent {
    /// The window known to be zero at every exponent `>= depth`.
    pub fn zero(depth: i64) -> Laurent {
        Laurent {
            depth,
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(depth: i64, mut coeffs: Vec<Fe>) -> Laurent {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Laurent { depth, coeffs }
    }

    /// `Σ c_i t^{-i}` for `i = 1..=digits.len()`, known down to `-digits.len()`.
    pub fn from_frac_digits(digits: &[Fe]) -> Laurent {
        let m = digits.len() as i64;
        Laurent::from_coeffs(-m, digits.iter().rev().copied().collect())
    }

    /// Sparse constructor: the given terms, zero elsewhere down to `depth`.
    /// Terms below `depth` are dropped.
    pub fn from_terms(terms: &[(i64, Fe)], depth: i64, f: &Field) -> Laurent {
        let top = terms.iter().map(|t| t.0).max().unwrap_or(depth).max(depth);
        let mut v = vec![Fe::ZERO; (top - depth + 1) as usize];
        for &(e, c) in terms {
            if e >= depth {
                let i = (e - depth) as usize;
                v[i] = f.add(v[i], c);
            }
        }
        Laurent::from_coeffs(depth, v)
    }

    /// A polynomial viewed through a window starting at `depth`.
    pub fn from_poly(p: &Poly, depth: i64) -> Laurent {
        let c = p.coeffs();
        if depth >= 0 {
            let start = (depth as usize).min(c.len());
            Laurent::from_coeffs(depth, c[start..].to_vec())
        } else {
            let mut v = vec![Fe::ZERO; (-depth) as usize];
            v.extend_from_slice(c);
            Laurent::from_coeffs(depth, v)
        }
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    /// Exponent of the highest known nonzero coefficient, if any.
    pub fn top(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.depth + self.coeffs.len() as i64 - 1)
        }
    }

    /// `ord α`, when certified by the window. `None` means every known
    /// coefficient is zero, so `ord α < depth` but is otherwise unknown.
    pub fn ord(&self) -> Option<i64> {
        self.top()
    }

    pub fn is_zero_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> Result<Fe> {
        if e < self.depth {
            return Err(Error::WindowTooShallow {
                needed: e,
                depth: self.depth,
            });
        }
        Ok(self
            .coeffs
            .get((e - self.depth) as usize)
            .copied()
            .unwrap_or(Fe::ZERO))
    }

    /// `res α`, the coefficient of `t^{-1}`.
    pub fn res(&self) -> Result<Fe> {
        self.coeff(-1)
    }

    /// Requires the window to reach exponent `e`.
    pub fn require_depth(&self, e: i64) -> Result<()> {
        if self.depth > e {
            Err(Error::WindowTooShallow {
                needed: e,
                depth: self.depth,
            })
        } else {
            Ok(())
        }
    }

    /// Decides `ord α < bound`, i.e. every coefficient at exponent `>= bound`
    /// vanishes. A nonzero known coefficient at or above `bound` settles the
    /// question even when the window stops above `bound`.
    pub fn ord_lt(&self, bound: i64) -> Result<bool> {
        if let Some(top) = self.top() {
            if top >= bound {
                return Ok(false);
            }
        }
        if self.depth > bound {
            return Err(Error::WindowTooShallow {
                needed: bound,
                depth: self.depth,
            });
        }
        Ok(true)
    }

    /// Raises the window floor to `depth`, forgetting lower coefficients.
    pub fn truncate(&self, depth: i64) -> Laurent {
        if depth <= self.depth {
            return self.clone();
        }
        let skip = ((depth - self.depth) as usize).min(self.coeffs.len());
        Laurent::from_coeffs(depth, self.coeffs[skip..].to_vec())
    }

    fn combine(&self, other: &Laurent, op: impl Fn(Fe, Fe) -> Fe) -> Laurent {
        let depth = self.depth.max(other.depth);
        let top = self
            .top()
            .unwrap_or(depth)
            .max(other.top().unwrap_or(depth))
            .max(depth);
        let v = (depth..=top)
            .map(|e| op(self.coeff(e).unwrap(), other.coeff(e).unwrap()))
            .collect();
        Laurent::from_coeffs(depth, v)
    }

    pub fn add(&self, other: &Laurent, f: &Field) -> Laurent {
        self.combine(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Laurent, f: &Field) -> Laurent {
        self.combine(other, |a, b| f.sub(a, b))
    }

    pub fn neg(&self, f: &Field) -> Laurent {
        Laurent::from_coeffs(self.depth, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe, f: &Field) -> Laurent {
        if c.is_zero() {
            // Zero times the unknown tail is still zero.
            return Laurent::zero(i64::MIN / 4);
        }
        Laurent::from_coeffs(
            self.depth,
            self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
        )
    }

    /// Product with an exact polynomial. The window floor rises by `deg p`.
    pub fn mul_poly(&self, p: &Poly, f: &Field) -> Laurent {
        let Some(dp) = p.degree() else {
            return Laurent::zero(i64::MIN / 4);
        };
        let depth = self.depth + dp as i64;
        if self.coeffs.is_empty() {
            return Laurent::zero(depth);
        }
        // Full convolution starts at self.depth; drop what the tail pollutes.
        let mut v = vec![Fe::ZERO; self.coeffs.len() + dp];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in p.coeffs().iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Laurent::from_coeffs(depth, v[dp..].to_vec())
    }

    /// Product of two windows. A coefficient of the product is known iff no
    /// unknown coefficient of either factor can reach it.
    pub fn mul(&self, other: &Laurent, f: &Field) -> Laurent {
        let ta = self.top().unwrap_or(self.depth - 1);
        let tb = other.top().unwrap_or(other.depth - 1);
        let depth = (self.depth + tb).max(other.depth + ta);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Laurent::zero(depth);
        }
        let base = self.depth + other.depth;
        let mut v = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        let skip = (depth - base) as usize;
        Laurent::from_coeffs(depth, v.get(skip..).map(|s| s.to_vec()).unwrap_or_default())
    }

    /// `res(α p)` for a polynomial `p`: `Σ_j α_{-1-j} p_j`.
    pub fn res_of_poly_product(&self, p: &Poly, f: &Field) -> Result<Fe> {
        let Some(dp) = p.degree() else {
            return Ok(Fe::ZERO);
        };
        self.require_depth(-1 - dp as i64)?;
        let mut acc = Fe::ZERO;
        for (j, &c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a = self.coeff(-1 - j as i64)?;
            acc = f.add(acc, f.mul(a, c));
        }
        Ok(acc)
    }

    /// The polynomial part `[α]`.
    pub fn int_part(&self) -> Result<Poly> {
        self.require_depth(0)?;
        let v: Vec<Fe> = (0..=self.top().unwrap_or(-1).max(-1))
            .map(|e| self.coeff(e).unwrap())
            .collect();
        Ok(Poly::from_coeffs(v))
    }

    /// The fractional part `α - [α]`, an element of `𝕋`.
    pub fn frac_part(&self) -> Laurent {
        if self.depth >= 0 {
            return Laurent::zero(0);
        }
        let keep = ((-self.depth) as usize).min(self.coeffs.len());
        Laurent::from_coeffs(self.depth, self.coeffs[..keep].to_vec())
    }

    /// Known fractional coefficients as digits `c_1, c_2, ...` of `Σ c_i t^{-i}`,
    /// down to the window floor.
    pub fn frac_digits(&self) -> Vec<Fe> {
        (1..=(-self.depth).max(0))
            .map(|i| self.coeff(-i).unwrap())
            .collect()
    }

    pub fn display(&self, f: &Field) -> String {
        let mut terms = Vec::new();
        if let Some(top) = self.top() {
            for e in (self.depth..=top).rev() {
                let c = self.coeff(e).unwrap();
                if !c.is_zero() {
                    terms.push(format!("{}*t^{}", f.format_elem(c), e));
                }
            }
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        format!("{} + O(t^{})", terms.join(" + "), self.depth - 1)
    }
}

/// A reduced fraction `num/den` with `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly, f: &Field) -> Result<RationalFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den, f);
        let (num, den) = if g.is_zero() || g == Poly::one() {
            (num, den)
        } else {
            (num.divmod(&g, f)?.0, den.divmod(&g, f)?.0)
        };
        let c = f.inv(den.lead()).unwrap();
        Ok(RationalFn {
            num: num.scale(c, f),
            den: den.scale(c, f),
        })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn ord(&self) -> Option<i64> {
        self.num.degree().map(|d| d as i64 - self.den.deg_i64())
    }
}

/// Expands `r` in powers of `1/t`, exactly down to exponent `depth`.
pub fn laurent_of_rational(r: &RationalFn, depth: i64, f: &Field) -> Result<Laurent> {
    laurent_of_ratio(r.num(), r.den(), depth, f)
}

/// Long-division expansion of `num/den` without reducing the fraction first.
pub fn laurent_of_ratio(num: &Poly, den: &Poly, depth: i64, f: &Field) -> Result<Laurent> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let l = (-depth).max(0) as usize;
    let (q, _) = num.shift(l).divmod(den, f)?;
    // q * t^{-l} carries every coefficient at exponents >= -l exactly.
    let c = q.coeffs();
    let skip = (depth + l as i64) as usize;
    let v = if skip < c.len() {
        c[skip..].to_vec()
    } else {
        Vec::new()
    };
    Ok(Laurent::from_coeffs(depth, v))
}

/// `e(α) = e_q(res α)`.
pub fn char_e(alpha: &Laurent, f: &Field) -> Result<Complex64> {
    Ok(f.char_e_q(alpha.res()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn rational_expansions() {
        let f3 = f(3);
        let one_over_t = laurent_of_ratio(&Poly::one(), &Poly::t(), -3, &f3).unwrap();
        assert_eq!(one_over_t.coeff(-1).unwrap(), Fe::ONE);
        assert_eq!(one_over_t.coeff(-2).unwrap(), Fe::ZERO);
        assert_eq!(one_over_t.coeff(-3).unwrap(), Fe::ZERO);
        assert!(one_over_t.coeff(-4).is_err());

        let num = Poly::t();
        let den = Poly::parse("t^2+1", &f3).unwrap();
        let a = laurent_of_ratio(&num, &den, -4, &f3).unwrap();
        let got: Vec<u32> = (-4..=-1)
            .rev()
            .map(|e| a.coeff(e).unwrap().index() as u32)
            .collect();
        assert_eq!(got, [1, 0, 2, 0]);
        assert!((char_e(&a, &f3).unwrap() - f3.char_e_q(Fe::ONE)).norm() < 1e-12);

        let f2 = f(2);
        let r = RationalFn::new(Poly::parse("t+1", &f2).unwrap(), Poly::t(), &f2).unwrap();
        let a = laurent_of_rational(&r, -2, &f2).unwrap();
        assert_eq!(a.int_part().unwrap(), Poly::one());
        assert_eq!(a.coeff(-1).unwrap(), Fe::ONE);
        assert_eq!(a.coeff(-2).unwrap(), Fe::ZERO);
    }

    #[test]
    fn remultiplying_recovers_numerator() {
        let f3 = f(3);
        let num = Poly::parse("2*t^2+t+1", &f3).unwrap();
        let den = Poly::parse("t^3+2*t+1", &f3).unwrap();
        let a = laurent_of_ratio(&num, &den, -6, &f3).unwrap();
        let back = a.mul_poly(&den, &f3);
        assert_eq!(back.depth(), -3);
        for e in -3..=3 {
            let expect = if e >= 0 {
                num.coeff(e as usize)
            } else {
                Fe::ZERO
            };
            assert_eq!(back.coeff(e).unwrap(), expect, "exponent {e}");
        }
    }

    #[test]
    fn residue_conventions() {
        let f5 = f(5);
        let a = Laurent::from_terms(&[(-2, Fe::ONE)], -5, &f5);
        assert_eq!(a.res().unwrap(), Fe::ZERO);
        assert!((char_e(&a, &f5).unwrap() - 1.0).norm() < 1e-12);
        let shallow = Laurent::zero(0);
        assert!(matches!(shallow.res(), Err(Error::WindowTooShallow { .. })));
    }

    #[test]
    fn window_product_depth() {
        let f2 = f(2);
        // (t^{-1} + O(t^{-3})) * (t^{-1} + O(t^{-3})) is known down to t^{-4}.
        let a = Laurent::from_terms(&[(-1, Fe::ONE)], -3, &f2);
        let b = a.mul(&a, &f2);
        assert_eq!(b.depth(), -4);
        assert_eq!(b.top(), Some(-2));
    }
}
