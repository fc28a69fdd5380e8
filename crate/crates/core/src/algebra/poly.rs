//! Dense polynomials over `F_q`, coefficients stored low to high.

use std::fmt::Write as _;

use super::field::{Fe, Field};
use crate::error::{Error, Result};

/// An element of `F_q[t]`. The top coefficient is never zero; the zero
/// polynomial has no coefficients and degree `None` (the `-∞` sentinel).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Fe::ONE)
    }

    pub fn constant(c: Fe) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// `c * t^d`.
    pub fn monomial(c: Fe, d: usize) -> Poly {
        let mut v = vec![Fe::ZERO; d + 1];
        v[d] = c;
        Poly::from_coeffs(v)
    }

    /// The variable `t`.
    pub fn t() -> Poly {
        Poly::monomial(Fe::ONE, 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds from prime-field integers, low to high.
    pub fn from_ints(f: &Field, c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| f.from_int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer, `-1` standing in for `-∞` where callers
    /// only need an ordering.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe, f: &Field) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Multiplication by `t^d`.
    pub fn shift(&self, d: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Fe::ZERO; d];
        v.extend_from_slice(&self.coeffs);
        Poly { coeffs: v }
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, mut n: u32, f: &Field) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &Poly, f: &Field) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = f.inv(d.lead()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![Fe::ZERO; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dd], inv);
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, dc));
            }
        }
        r.truncate(dd);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, d: &Poly, f: &Field) -> Result<Poly> {
        Ok(self.divmod(d, f)?.1)
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self, f: &Field) -> Poly {
        match f.inv(self.lead()) {
            Some(inv) => self.scale(inv, f),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Returns `(g, u, v)` with `g` monic and `u*self + v*other = g`.
    pub fn ext_gcd(&self, other: &Poly, f: &Field) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (Poly::one(), Poly::zero());
        let (mut v0, mut v1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1, f).expect("r1 is nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let u2 = u0.sub(&q.mul(&u1, f), f);
            u0 = std::mem::replace(&mut u1, u2);
            let v2 = v0.sub(&q.mul(&v1, f), f);
            v0 = std::mem::replace(&mut v1, v2);
        }
        match f.inv(r0.lead()) {
            Some(c) => (r0.scale(c, f), u0.scale(c, f), v0.scale(c, f)),
            None => (r0, u0, v0),
        }
    }

    pub fn eval(&self, x: Fe, f: &Field) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Position of this polynomial in the enumeration of `I_X` for any `X`
    /// above its degree: `Σ index(c_i) q^i`.
    pub fn to_index(&self, q: u32) -> u128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, c| acc * q as u128 + c.index() as u128)
    }

    pub fn from_index(mut idx: u128, f: &Field) -> Poly {
        let q = f.q() as u128;
        let mut v = Vec::new();
        while idx > 0 {
            v.push(f.elem((idx % q) as usize));
            idx /= q;
        }
        Poly::from_coeffs(v)
    }

    pub fn parse(s: &str, f: &Field) -> Result<Poly> {
        parse_poly(s, f)
    }

    pub fn display(&self, f: &Field) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            let cs = f.format_elem(c);
            match i {
                0 => out.push_str(&cs),
                _ => {
                    if c != Fe::ONE {
                        let _ = write!(out, "{cs}*");
                    }
                    out.push('t');
                    if i > 1 {
                        let _ = write!(out, "^{i}");
                    }
                }
            }
        }
        out
    }
}

/// Number of polynomials of degree `< x`, i.e. `q^x`, if it fits.
pub fn count_below(f: &Field, x: u32) -> Option<u128> {
    (f.q() as u128).checked_pow(x)
}

/// The `i`-th element of `I_X` in the fixed enumeration order: `i` is read in
/// base `q` with the `t^0` coefficient as the least significant digit.
pub fn nth_below(f: &Field, x: u32, i: u128) -> Poly {
    debug_assert!(count_below(f, x).map_or(true, |n| i < n));
    Poly::from_index(i, f)
}

/// Streams `I_X` restricted to the index range `range`; disjoint ranges give
/// disjoint pieces of the enumeration.
pub fn enumerate_range(
    f: &Field,
    x: u32,
    range: std::ops::Range<u128>,
) -> impl Iterator<Item = Poly> + '_ {
    let n = count_below(f, x).expect("enumeration too large");
    let end = range.end.min(n);
    (range.start..end).map(move |i| Poly::from_index(i, f))
}

/// Streams all `q^X` elements of `I_X = {x : deg x < X}`.
pub fn enumerate_below(f: &Field, x: u32) -> impl Iterator<Item = Poly> + '_ {
    enumerate_range(f, x, 0..u128::MAX)
}

/// Collects `I_X` into a vector.
pub fn all_below(f: &Field, x: u32) -> Vec<Poly> {
    enumerate_below(f, x).collect()
}

fn parse_poly(s: &str, f: &Field) -> Result<Poly> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // Split into signed terms, leaving bracketed coordinates intact.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut depth = 0;
    for ch in src.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch)
            }
            ']' => {
                depth -= 1;
                cur.push(ch)
            }
            '+' | '-' if depth == 0 => {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                } else if !terms.is_empty() || ch == '+' {
                    return Err(Error::Parse(format!("dangling sign in '{s}'")));
                }
                neg = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("dangling sign in '{s}'")));
    }
    terms.push((neg, cur));

    let mut acc: Vec<Fe> = Vec::new();
    for (neg, term) in terms {
        let (c, d) = parse_term(&term, f)?;
        let c = if neg { f.neg(c) } else { c };
        if acc.len() <= d {
            acc.resize(d + 1, Fe::ZERO);
        }
        acc[d] = f.add(acc[d], c);
    }
    Ok(Poly::from_coeffs(acc))
}

fn parse_term(term: &str, f: &Field) -> Result<(Fe, usize)> {
    let bad = || Error::Parse(format!("malformed term '{term}'"));
    let (coef_str, mono) = match term.find('t') {
        None => (term, None),
        Some(pos) => {
            let c = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
            (c, Some(&term[pos + 1..]))
        }
    };
    let coef = if coef_str.is_empty() {
        if mono.is_none() {
            return Err(bad());
        }
        Fe::ONE
    } else {
        parse_coeff(coef_str, f)?
    };
    let deg = match mono {
        None => 0,
        Some("") => 1,
        Some(rest) => {
            let e = rest.strip_prefix('^').ok_or_else(bad)?;
            e.parse::<usize>().map_err(|_| bad())?
        }
    };
    if deg > 100_000 {
        return Err(Error::Parse(format!("degree {deg} is too large")));
    }
    Ok((coef, deg))
}

fn parse_coeff(s: &str, f: &Field) -> Result<Fe> {
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let coords = inner
            .split(',')
            .map(|x| {
                x.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad coordinate '{x}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        return f.from_coords(&coords);
    }
    let v: i64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad coefficient '{s}'")))?;
    if !(0..f.p() as i64).contains(&v) {
        return Err(Error::CoordinateOutOfRange { value: v, p: f.p() });
    }
    Ok(f.from_int(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let f3 = f(3);
        let p = Poly::parse("2*t^3 + t + 1", &f3).unwrap();
        assert_eq!(p, Poly::from_ints(&f3, &[1, 1, 0, 2]));
        assert_eq!(p.display(&f3), "2*t^3+t+1");
        assert_eq!(Poly::parse("0", &f3).unwrap(), Poly::zero());
        assert_eq!(
            Poly::parse("t^2 - 1", &f3).unwrap(),
            Poly::from_ints(&f3, &[2, 0, 1])
        );
        assert!(Poly::parse("3*t", &f3).is_err());
        assert!(Poly::parse("t^", &f3).is_err());
        assert!(Poly::parse("", &f3).is_err());

        let f9 = f(9);
        let p = Poly::parse("[0,1]*t^2 + [2,2]", &f9).unwrap();
        assert_eq!(Poly::parse(&p.display(&f9), &f9).unwrap(), p);
        assert_eq!(p.lead(), f9.from_coords(&[0, 1]).unwrap());
    }

    #[test]
    fn division_and_gcd() {
        let f3 = f(3);
        let a = Poly::parse("t^4 + 2*t + 1", &f3).unwrap();
        let b = Poly::parse("t^2 + 1", &f3).unwrap();
        let (q, r) = a.divmod(&b, &f3).unwrap();
        assert_eq!(q.mul(&b, &f3).add(&r, &f3), a);
        assert!(r.deg_i64() < 2);
        assert_eq!(a.divmod(&Poly::zero(), &f3), Err(Error::DivisionByZero));

        let g = Poly::parse("t + 2", &f3).unwrap();
        let x = g.mul(&Poly::parse("t^2 + 1", &f3).unwrap(), &f3);
        let y = g.mul(&Poly::parse("t + 1", &f3).unwrap(), &f3);
        assert_eq!(x.gcd(&y, &f3), g);
        let (d, u, v) = x.ext_gcd(&y, &f3);
        assert_eq!(d, g);
        assert_eq!(u.mul(&x, &f3).add(&v.mul(&y, &f3), &f3), g);
    }

    #[test]
    fn enumeration_order() {
        let f2 = f(2);
        let all = all_below(&f2, 2);
        let shown: Vec<String> = all.iter().map(|p| p.display(&f2)).collect();
        assert_eq!(shown, ["0", "1", "t", "t+1"]);
        for (i, p) in all.iter().enumerate() {
            assert_eq!(p.to_index(2), i as u128);
        }
        let mut parts: Vec<Poly> = enumerate_range(&f2, 3, 0..3).collect();
        parts.extend(enumerate_range(&f2, 3, 3..8));
        assert_eq!(parts, all_below(&f2, 3));
    }
}
