//! Packing fixed-length coefficient vectors into `u128` hash keys.

use std::collections::HashMap;

use crate::algebra::{Fe, Field, Poly};
use crate::error::{Error, Result};

/// Base-`q` encoding of length-`len` vectors over `F_q`.
#[derive(Clone, Debug)]
pub(crate) struct KeyCodec {
    field: Field,
    q: u128,
    len: usize,
}

impl KeyCodec {
    pub fn new(field: &Field, len: usize) -> Result<KeyCodec> {
        let q = field.q() as u128;
        if q.checked_pow(len as u32).is_none() {
            return Err(Error::pre(format!(
                "a vector of {len} coefficients over F_{q} does not fit in a 128-bit key"
            )));
        }
        Ok(KeyCodec {
            field: field.clone(),
            q,
            len,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn encode(&self, v: &[Fe]) -> u128 {
        debug_assert_eq!(v.len(), self.len);
        v.iter()
            .rev()
            .fold(0, |acc, c| acc * self.q + c.index() as u128)
    }

    pub fn decode(&self, mut key: u128, out: &mut [Fe]) {
        for c in out.iter_mut() {
            *c = self.field.elem((key % self.q) as usize);
            key /= self.q;
        }
    }

    /// Dense coefficient vector of a polynomial, zero-padded to `len`.
    pub fn dense(&self, p: &Poly) -> Result<Vec<Fe>> {
        if p.coeffs().len() > self.len {
            return Err(Error::InvariantViolation(format!(
                "degree {} does not fit a window of {} coefficients",
                p.deg_i64(),
                self.len
            )));
        }
        let mut v = vec![Fe::ZERO; self.len];
        v[..p.coeffs().len()].copy_from_slice(p.coeffs());
        Ok(v)
    }

    /// `a + b` coordinatewise, written into `out`.
    #[inline]
    pub fn add_into(&self, a: &[Fe], b: &[Fe], out: &mut [Fe]) {
        for i in 0..self.len {
            out[i] = self.field.add(a[i], b[i]);
        }
    }

    #[inline]
    pub fn sub_into(&self, a: &[Fe], b: &[Fe], out: &mut [Fe]) {
        for i in 0..self.len {
            out[i] = self.field.sub(a[i], b[i]);
        }
    }

    /// One convolution step: the multiset `{k + v : k ∈ map, v ∈ steps}`.
    pub fn convolve(&self, map: &HashMap<u128, u128>, steps: &[Vec<Fe>]) -> HashMap<u128, u128> {
        let mut out: HashMap<u128, u128> = HashMap::with_capacity(map.len());
        let mut base = vec![Fe::ZERO; self.len];
        let mut sum = vec![Fe::ZERO; self.len];
        for (&key, &mult) in map {
            self.decode(key, &mut base);
            for v in steps {
                self.add_into(&base, v, &mut sum);
                *out.entry(self.encode(&sum)).or_insert(0) += mult;
            }
        }
        out
    }

    /// The multiset of sums of `m` vectors drawn from `steps`, with
    /// multiplicity (ordered tuples).
    pub fn sumset(&self, steps: &[Vec<Fe>], m: u32) -> HashMap<u128, u128> {
        let mut map = HashMap::new();
        map.insert(0u128, 1u128);
        for _ in 0..m {
            map = self.convolve(&map, steps);
        }
        map
    }
}
