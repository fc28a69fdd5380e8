//! `J_s(ℛ; X)`: solutions of `Σ u_i^j = Σ v_i^j` for every `j ∈ ℛ`.

use rayon::prelude::*;
use serde::Serialize;

use super::check_budget;
use super::keys::KeyCodec;
use crate::algebra::{all_below, Fe, Field};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalSystem {
    /// Sorted, distinct, positive.
    pub exponents: Vec<u32>,
    pub s: u32,
    pub x: u32,
}

impl DiagonalSystem {
    pub fn new(mut exponents: Vec<u32>, s: u32, x: u32) -> Result<DiagonalSystem> {
        exponents.sort_unstable();
        exponents.dedup();
        if exponents.is_empty() || exponents[0] == 0 {
            return Err(Error::pre("exponent set must be nonempty and positive"));
        }
        if s == 0 || x == 0 {
            return Err(Error::pre("s and X must be at least 1"));
        }
        Ok(DiagonalSystem { exponents, s, x })
    }

    /// Concatenated dense power vectors `(u^j)_{j∈ℛ}` for every `u ∈ I_X`.
    fn vectors(&self, f: &Field) -> Result<(KeyCodec, Vec<Vec<Fe>>)> {
        let widths: Vec<usize> = self
            .exponents
            .iter()
            .map(|&j| (j * (self.x - 1)) as usize + 1)
            .collect();
        let codec = KeyCodec::new(f, widths.iter().sum())?;
        let vecs = all_below(f, self.x)
            .iter()
            .map(|u| {
                let mut v = Vec::with_capacity(codec.len());
                for (&j, &w) in self.exponents.iter().zip(&widths) {
                    let p = u.pow(j, f);
                    v.extend((0..w).map(|i| p.coeff(i)));
                }
                v
            })
            .collect();
        Ok((codec, vecs))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VinogradovMethod {
    /// Enumerates all of `I_X^{2s}`.
    Brute,
    /// Squares the multiplicities of `s`-fold power-sum vectors.
    Mitm,
}

pub fn vinogradov_count(
    sys: &DiagonalSystem,
    f: &Field,
    method: VinogradovMethod,
    budget: u64,
) -> Result<u128> {
    let qx = (f.q() as u128).checked_pow(sys.x);
    let (codec, vecs) = sys.vectors(f)?;
    match method {
        VinogradovMethod::Mitm => {
            check_budget(
                "Vinogradov table",
                qx.and_then(|v| v.checked_pow(sys.s)),
                budget,
            )?;
            let map = codec.sumset(&vecs, sys.s);
            Ok(map.values().map(|m| m * m).sum())
        }
        VinogradovMethod::Brute => {
            check_budget(
                "Vinogradov enumeration",
                qx.and_then(|v| v.checked_pow(2 * sys.s)),
                budget,
            )?;
            let zero = vec![Fe::ZERO; codec.len()];
            fn rec(codec: &KeyCodec, vecs: &[Vec<Fe>], acc: &[Fe], plus: u32, minus: u32) -> u128 {
                if plus == 0 && minus == 0 {
                    return u128::from(acc.iter().all(|c| c.is_zero()));
                }
                let mut next = vec![Fe::ZERO; codec.len()];
                let mut total = 0;
                for v in vecs {
                    if plus > 0 {
                        codec.add_into(acc, v, &mut next);
                        total += rec(codec, vecs, &next, plus - 1, minus);
                    } else {
                        codec.sub_into(acc, v, &mut next);
                        total += rec(codec, vecs, &next, 0, minus - 1);
                    }
                }
                total
            }
            Ok(vecs
                .par_iter()
                .map(|first| {
                    let mut acc = zero.clone();
                    codec.add_into(&zero, first, &mut acc);
                    rec(&codec, &vecs, &acc, sys.s - 1, sys.s)
                })
                .sum())
        }
    }
}
