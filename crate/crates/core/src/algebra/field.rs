//! Finite fields `F_{p^e}` in an explicit power basis.
//!
//! Elements are stored as an index `Σ c_i p^i` over the power-basis
//! coordinates `c_i`, and all arithmetic goes through precomputed tables.
//! Prime-field residues `0..p` therefore keep their natural index.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order the table-driven representation accepts.
pub const MAX_ORDER: u32 = 1024;

/// Degree cap for the exhaustive irreducibility check.
pub const MAX_EXTENSION_DEGREE: u32 = 8;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `F_{p^e}` described by its characteristic and a monic irreducible modulus.
///
/// `modulus` holds coefficients low to high and has length `e + 1`. For
/// `e = 1` it is the identity modulus `u` (`[0, 1]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p > MAX_ORDER {
            return Err(Error::InvalidField(format!("q = {p} exceeds {MAX_ORDER}")));
        }
        Ok(FieldSpec {
            p,
            e: 1,
            modulus: vec![0, 1],
        })
    }

    /// Validates `modulus` (coefficients low to high) as a monic irreducible
    /// polynomial over `F_p` by exhaustive factor search.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let mut modulus = modulus;
        while modulus.len() > 1 && *modulus.last().unwrap() == 0 {
            modulus.pop();
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::CoordinateOutOfRange { value: c as i64, p });
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if e == 1 {
            // Any monic linear polynomial defines F_p; keep the identity basis.
            return Self::prime(p);
        }
        if e > MAX_EXTENSION_DEGREE {
            return Err(Error::InvalidField(format!(
                "extension degree {e} exceeds {MAX_EXTENSION_DEGREE}"
            )));
        }
        let q = (p as u64).pow(e);
        if q > MAX_ORDER as u64 {
            return Err(Error::InvalidField(format!("q = {q} exceeds {MAX_ORDER}")));
        }
        if let Some(factor) = find_factor(p, &modulus) {
            return Err(Error::ReducibleModulus {
                p,
                reason: format!("divisible by {}", fp_poly_to_string(&factor)),
            });
        }
        Ok(FieldSpec { p, e, modulus })
    }

    /// The shipped field of order `q`: `F_q` itself when `q` is prime, or a
    /// built-in modulus for the supported prime powers.
    pub fn canonical(q: u32) -> Result<Self> {
        if is_prime(q as u64) {
            return Self::prime(q);
        }
        let (p, modulus): (u32, &[u32]) = match q {
            4 => (2, &[1, 1, 1]),
            8 => (2, &[1, 1, 0, 1]),
            9 => (3, &[1, 0, 1]),
            16 => (2, &[1, 1, 0, 0, 1]),
            25 => (5, &[2, 0, 1]),
            27 => (3, &[1, 2, 0, 1]),
            32 => (2, &[1, 0, 1, 0, 0, 1]),
            49 => (7, &[1, 0, 1]),
            64 => (2, &[1, 1, 0, 0, 0, 0, 1]),
            _ => {
                return Err(Error::InvalidField(format!(
                    "no built-in modulus for q = {q}; supply one explicitly"
                )))
            }
        };
        Self::with_modulus(p, modulus.to_vec())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Modulus rendered in the polynomial grammar with variable `t`.
    pub fn modulus_string(&self) -> String {
        fp_poly_to_string(&self.modulus)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(
                f,
                "F_{}[u]/({})",
                self.p,
                self.modulus_string().replace('t', "u")
            )
        }
    }
}

fn fp_poly_to_string(c: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        terms.push(match (a, i) {
            (_, 0) => a.to_string(),
            (1, _) => mono,
            _ => format!("{a}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Remainder of `a` modulo monic `m` over `F_p`.
fn fp_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let v = &mut r[shift + i];
                *v = (*v + p - (lead * mc) % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Finds a monic factor of degree `1..=deg/2`, if one exists.
fn find_factor(p: u32, m: &[u32]) -> Option<Vec<u32>> {
    let e = m.len() - 1;
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                cand.push((v % p as u64) as u32);
                v /= p as u64;
            }
            cand.push(1);
            if fp_rem(p, m, &cand).is_empty() {
                return Some(cand);
            }
        }
    }
    None
}

/// Element of a [`Field`], addressed by its power-basis index.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Fe(pub(crate) u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    spec: FieldSpec,
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    trace: Vec<u32>,
    chars: Vec<Complex64>,
}

/// Shared, immutable arithmetic context for one `F_q`.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.t.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t) || self.t.spec == other.t.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Field {
        let p = spec.p as usize;
        let e = spec.e as usize;
        let q = p.pow(e as u32);
        let coords = |i: usize| -> Vec<u32> {
            let mut v = i;
            (0..e)
                .map(|_| {
                    let c = (v % p) as u32;
                    v /= p;
                    c
                })
                .collect()
        };
        let index = |c: &[u32]| -> usize { c.iter().rev().fold(0, |acc, &x| acc * p + x as usize) };
        let all: Vec<Vec<u32>> = (0..q).map(coords).collect();

        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = all[a]
                    .iter()
                    .zip(&all[b])
                    .map(|(x, y)| (x + y) % p as u32)
                    .collect();
                add[a * q + b] = index(&s) as u16;

                let mut prod = vec![0u32; 2 * e - 1];
                for (i, &x) in all[a].iter().enumerate() {
                    for (j, &y) in all[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p as u32;
                    }
                }
                let mut r = if e == 1 {
                    prod
                } else {
                    fp_rem(spec.p, &prod, &spec.modulus)
                };
                r.resize(e, 0);
                mul[a * q + b] = index(&r) as u16;
            }
        }
        let neg: Vec<u16> = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16)
            .collect();
        let inv: Vec<u16> = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u16
                }
            })
            .collect();

        let mut tables = Tables {
            spec,
            q,
            add,
            mul,
            neg,
            inv,
            trace: Vec::new(),
            chars: Vec::new(),
        };
        tables.trace = (0..q).map(|a| frobenius_trace(&tables, a)).collect();
        tables.chars = tables
            .trace
            .iter()
            .map(|&t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / p as f64))
            .collect();
        Field {
            t: Arc::new(tables),
        }
    }

    /// The shipped field of order `q`.
    pub fn of_order(q: u32) -> Result<Field> {
        Ok(Field::new(FieldSpec::canonical(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.t.spec
    }

    pub fn p(&self) -> u32 {
        self.t.spec.p
    }

    pub fn e(&self) -> u32 {
        self.t.spec.e
    }

    pub fn q(&self) -> u32 {
        self.t.q as u32
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Element with the given index; panics if out of range.
    pub fn elem(&self, i: usize) -> Fe {
        assert!(
            i < self.t.q,
            "element index {i} out of range for q = {}",
            self.t.q
        );
        Fe(i as u16)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.t.q as u16).map(Fe)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p() as i64) as u16)
    }

    pub fn from_coords(&self, c: &[i64]) -> Result<Fe> {
        let p = self.p() as i64;
        if c.len() != self.e() as usize {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                self.e(),
                c.len()
            )));
        }
        let mut idx = 0i64;
        for &x in c.iter().rev() {
            if !(0..p).contains(&x) {
                return Err(Error::CoordinateOutOfRange {
                    value: x,
                    p: self.p(),
                });
            }
            idx = idx * p + x;
        }
        Ok(Fe(idx as u16))
    }

    pub fn coords(&self, a: Fe) -> Vec<u32> {
        let p = self.p();
        let mut v = a.0 as u32;
        (0..self.e())
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    pub fn is_prime_field_elem(&self, a: Fe) -> bool {
        (a.0 as u32) < self.p()
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.t.add[a.index() * self.t.q + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.t.neg[a.index()])
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.t.mul[a.index() * self.t.q + b.index()])
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            None
        } else {
            Some(Fe(self.t.inv[a.index()]))
        }
    }

    pub fn pow(&self, a: Fe, mut n: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Absolute trace `F_q -> F_p`, as a residue in `0..p`.
    pub fn trace(&self, a: Fe) -> u32 {
        self.t.trace[a.index()]
    }

    /// The additive character `e_q(a) = exp(2πi tr(a)/p)`.
    #[inline]
    pub fn char_e_q(&self, a: Fe) -> Complex64 {
        self.t.chars[a.index()]
    }

    pub fn format_elem(&self, a: Fe) -> String {
        if self.e() == 1 {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coords(a).iter().map(|x| x.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }
}

fn frobenius_trace(t: &Tables, a: usize) -> u32 {
    let q = t.q;
    let p = t.spec.p as u64;
    let mut acc = 0usize;
    let mut x = a;
    for _ in 0..t.spec.e {
        acc = t.add[acc * q + x] as usize;
        // x <- x^p
        let mut r = 1usize;
        let mut base = x;
        let mut n = p;
        while n > 0 {
            if n & 1 == 1 {
                r = t.mul[r * q + base] as usize;
            }
            base = t.mul[base * q + base] as usize;
            n >>= 1;
        }
        x = r;
    }
    assert!(
        (acc as u32) < t.spec.p,
        "trace left the prime subfield; modulus is not irreducible"
    );
    acc as u32
}

/// Additive closure of `{x^k : x ∈ F_q}`, sorted by index.
///
/// The k-th powers contain 1 and are closed under multiplication, so the
/// closure is a subfield.
pub fn jqk_closure(field: &Field, k: u32) -> Vec<Fe> {
    let q = field.q() as usize;
    let mut seen = vec![false; q];
    let gens: Vec<Fe> = {
        let mut g: Vec<Fe> = field.elements().map(|x| field.pow(x, k as u64)).collect();
        g.sort();
        g.dedup();
        g
    };
    let mut stack = vec![Fe::ZERO];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for &g in &gens {
            let b = field.add(a, g);
            if !seen[b.index()] {
                seen[b.index()] = true;
                stack.push(b);
            }
        }
    }
    (0..q).filter(|&i| seen[i]).map(|i| Fe(i as u16)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_examples() {
        let f3 = Field::of_order(3).unwrap();
        assert_eq!(f3.trace(f3.elem(2)), 2);
        let f4 = Field::of_order(4).unwrap();
        // u has coordinates [0,1]
        let u = f4.from_coords(&[0, 1]).unwrap();
        assert_eq!(f4.trace(u), 1);
        for f in [&f3, &f4] {
            assert_eq!(f.trace(Fe::ZERO), 0);
        }
    }

    #[test]
    fn character_examples() {
        let f3 = Field::of_order(3).unwrap();
        let w = f3.char_e_q(f3.elem(1));
        assert!((w - Complex64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-12);
        let f2 = Field::of_order(2).unwrap();
        assert!((f2.char_e_q(Fe::ONE) + 1.0).norm() < 1e-12);
        let f4 = Field::of_order(4).unwrap();
        let u = f4.from_coords(&[0, 1]).unwrap();
        assert!((f4.char_e_q(u) + 1.0).norm() < 1e-12);
    }

    #[test]
    fn character_sums_vanish() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64] {
            let f = Field::of_order(q).unwrap();
            let s: Complex64 = f.elements().map(|a| f.char_e_q(a)).sum();
            assert!(s.norm() < 1e-12, "q = {q}: {s}");
        }
    }

    #[test]
    fn trace_is_surjective_and_additive() {
        for q in [4, 8, 9, 25, 27] {
            let f = Field::of_order(q).unwrap();
            let mut hit = vec![false; f.p() as usize];
            for a in f.elements() {
                hit[f.trace(a) as usize] = true;
                for b in f.elements() {
                    let lhs = f.trace(f.add(a, b));
                    assert_eq!(lhs, (f.trace(a) + f.trace(b)) % f.p());
                }
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = Field::of_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn reducible_moduli_are_rejected() {
        // t^2 + 1 = (t+1)^2 over F_2
        assert!(matches!(
            FieldSpec::with_modulus(2, vec![1, 0, 1]),
            Err(Error::ReducibleModulus { .. })
        ));
        // t^2 + 1 is irreducible over F_3
        assert!(FieldSpec::with_modulus(3, vec![1, 0, 1]).is_ok());
        // t^4 + t^2 + 1 = (t^2+t+1)^2 over F_2: no roots, quadratic factor
        assert!(FieldSpec::with_modulus(2, vec![1, 0, 1, 0, 1]).is_err());
        assert!(matches!(FieldSpec::prime(9), Err(Error::NotPrime(9))));
        assert!(FieldSpec::with_modulus(3, vec![1, 0, 2]).is_err());
    }

    #[test]
    fn jqk_examples() {
        let f7 = Field::of_order(7).unwrap();
        assert_eq!(jqk_closure(&f7, 3).len(), 7);
        let f4 = Field::of_order(4).unwrap();
        assert_eq!(jqk_closure(&f4, 3), vec![Fe::ZERO, Fe::ONE]);
        let f2 = Field::of_order(2).unwrap();
        for k in 1..6 {
            assert_eq!(jqk_closure(&f2, k).len(), 2);
        }
    }
}
