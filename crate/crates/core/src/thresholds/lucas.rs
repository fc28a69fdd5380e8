//! Binomial coefficients modulo `p` by base-`p` digits, and the digit
//! domination order built on them.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};

static LUCAS_FAULT: AtomicBool = AtomicBool::new(false);

/// Corrupts [`binom_mod_p`] by perturbing the lowest digit of its lower
/// argument. Exists so that the verification harness can be shown to fail.
#[doc(hidden)]
pub fn inject_lucas_fault(on: bool) {
    LUCAS_FAULT.store(on, Ordering::SeqCst);
}

/// Base-`p` digits of `n`, least significant first.
pub fn digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut d = Vec::new();
    while n > 0 {
        d.push(n % p);
        n /= p;
    }
    d
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `C(a, b) mod p` for `a < p`.
fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

/// `C(k, n) mod p` as the product of digitwise binomials.
pub fn binom_mod_p(k: u64, n: u64, p: u64) -> u64 {
    if n > k {
        return 0;
    }
    let kd = digits(k, p);
    let mut nd = digits(n, p);
    if LUCAS_FAULT.load(Ordering::Relaxed) {
        match nd.first_mut() {
            Some(d) => *d = (*d + 1) % p,
            None => nd.push(1),
        }
    }
    let mut acc = 1 % p;
    for (i, &a) in kd.iter().enumerate() {
        let b = nd.get(i).copied().unwrap_or(0);
        acc = acc * small_binom(a, b, p) % p;
        if acc == 0 {
            break;
        }
    }
    if nd.len() > kd.len() && nd[kd.len()..].iter().any(|&d| d != 0) {
        return 0;
    }
    acc
}

/// `j ⪯_p j'`: every base-`p` digit of `j` is at most the matching digit
/// of `j'`, equivalently `p ∤ C(j', j)`.
pub fn precedes_p(j: u64, j2: u64, p: u64) -> bool {
    let (a, b) = (digits(j, p), digits(j2, p));
    a.len() <= b.len() && a.iter().zip(&b).all(|(x, y)| x <= y)
}

/// `𝒮(𝒦)`: positive integers below some element of `K` in `⪯_p`.
pub fn shadow(kset: &BTreeSet<u64>, p: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for &k in kset {
        let d = digits(k, p);
        // Enumerate every digitwise-dominated vector.
        let mut cur = vec![0u64; d.len()];
        loop {
            let v = cur.iter().rev().fold(0, |acc, &x| acc * p + x);
            if v > 0 {
                out.insert(v);
            }
            let mut i = 0;
            while i < d.len() && cur[i] == d[i] {
                cur[i] = 0;
                i += 1;
            }
            if i == d.len() {
                break;
            }
            cur[i] += 1;
        }
    }
    out
}

/// `𝒦* = {k ∈ 𝒦 : p ∤ k, p^v k ∉ 𝒮(𝒦) for all v ≥ 1}`.
pub fn k_star(kset: &BTreeSet<u64>, p: u64) -> BTreeSet<u64> {
    let sh = shadow(kset, p);
    let top = sh.iter().max().copied().unwrap_or(0);
    kset.iter()
        .copied()
        .filter(|&k| {
            if k % p == 0 {
                return false;
            }
            let mut v = k.saturating_mul(p);
            while v <= top {
                if sh.contains(&v) {
                    return false;
                }
                v = v.saturating_mul(p);
            }
            true
        })
        .collect()
}

/// `k` is maximal in `K` when nothing else in `K` lies above it in `⪯_p`.
pub fn is_maximal(k: u64, kset: &BTreeSet<u64>, p: u64) -> bool {
    kset.contains(&k) && !kset.iter().any(|&j| j != k && precedes_p(k, j, p))
}

/// `h_0(k)`: the base-`p` digit sum of `k`.
pub fn h0_of(k: u64, p: u64) -> u64 {
    digits(k, p).iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(binom_mod_p(10, 4, 3), 0);
        assert_eq!(binom_mod_p(7, 4, 3), 2);
        for p in [2, 3, 5, 7] {
            for k in 0..40 {
                assert_eq!(binom_mod_p(k, 0, p), 1);
                assert!(precedes_p(k, k, p));
            }
        }
        assert_eq!(h0_of(7, 3), 3);
        assert_eq!(h0_of(10, 3), 2);
        assert_eq!(h0_of(5, 5), 1);
    }

    #[test]
    fn power_plus_one_shadow() {
        for (p, b) in [(2u64, 1u32), (2, 3), (3, 2), (5, 1)] {
            let k = p.pow(b) + 1;
            let kset: BTreeSet<u64> = [k].into();
            assert_eq!(shadow(&kset, p), [1, p.pow(b), k].into());
            assert_eq!(k_star(&kset, p), kset);
            assert!(is_maximal(k, &kset, p));
        }
        let kset: BTreeSet<u64> = [1, 3].into();
        assert!(!is_maximal(1, &kset, 2));
        // 2 = 2*1 lies in the shadow of {3} over p = 2, so 1 is excluded.
        assert_eq!(k_star(&kset, 2), [3].into());
    }
}
