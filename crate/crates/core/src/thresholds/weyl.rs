//! Symbolic Weyl differencing over `F_p`.

use std::collections::BTreeMap;

use super::lucas::binom_mod_p;

/// Sparse polynomial over `F_p` in `u, z_1, …, z_h`. Exponent vectors are
/// `[e_u, e_{z_1}, …, e_{z_h}]`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    p: u64,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl MultiPoly {
    /// `c · u^ell` with no `z` variables.
    pub fn u_power(ell: u32, c: u64, p: u64) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if c % p != 0 {
            terms.insert(vec![ell], c % p);
        }
        MultiPoly { p, nvars: 1, terms }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of variables including `u`.
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    /// `w(u + z) − w(u)` with `z` a fresh variable.
    pub fn difference(&self) -> MultiPoly {
        let p = self.p;
        let mut terms: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (exps, &c) in &self.terms {
            let a = exps[0];
            for i in 1..=a {
                let b = binom_mod_p(a as u64, i as u64, p);
                if b == 0 {
                    continue;
                }
                let mut e = exps.clone();
                e[0] = a - i;
                e.push(i);
                let slot = terms.entry(e).or_insert(0);
                *slot = (*slot + b * c) % p;
            }
        }
        terms.retain(|_, c| *c != 0);
        MultiPoly {
            p,
            nvars: self.nvars + 1,
            terms,
        }
    }
}

/// `Δ_{z_h} ⋯ Δ_{z_1} w`.
pub fn weyl_diff(w: &MultiPoly, h: u32) -> MultiPoly {
    let mut cur = w.clone();
    for _ in 0..h {
        if cur.is_zero() {
            cur.nvars += 1;
            continue;
        }
        cur = cur.difference();
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_step() {
        assert!(weyl_diff(&MultiPoly::u_power(0, 1, 3), 1).is_zero());
        for ell in 1..10 {
            assert!(!weyl_diff(&MultiPoly::u_power(ell, 1, 3), 1).is_zero());
        }
    }

    #[test]
    fn nullity_at_digit_sum() {
        let w = MultiPoly::u_power(7, 1, 3);
        let d3 = weyl_diff(&w, 3);
        assert!(!d3.is_zero());
        assert_eq!(d3.nvars(), 4);
        assert!(weyl_diff(&w, 4).is_zero());
        // Below the characteristic, u^k survives k steps as k! z_1 ⋯ z_k.
        let w = MultiPoly::u_power(5, 1, 7);
        let d5 = weyl_diff(&w, 5);
        let terms: Vec<_> = d5.terms().collect();
        assert_eq!(terms, vec![(&[0, 1, 1, 1, 1, 1][..], 120 % 7)]);
        assert!(weyl_diff(&w, 6).is_zero());
    }
}
