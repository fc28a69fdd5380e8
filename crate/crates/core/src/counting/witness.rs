//! Bounded search for explicit sums of `k`-th powers.

use std::collections::HashMap;

use super::keys::KeyCodec;
use crate::algebra::{all_below, Fe, Field, Poly};
use crate::error::{Error, Result};

/// Breadth-first search for `x_1, ..., x_m` with `Σ x_i^k = n`.
///
/// Summands range over `deg x < ⌈(deg n + 1)/k⌉ + 1` so that leading terms
/// may cancel. `budget` caps the number of sum states expanded. `None` means
/// nothing was found within the bounds; it is not a proof of non-membership.
pub fn witness_in_jqk_ring(n: &Poly, k: u32, f: &Field, budget: u64) -> Result<Option<Vec<Poly>>> {
    if k == 0 {
        return Err(Error::pre("k must be positive"));
    }
    if n.is_zero() {
        return Ok(Some(Vec::new()));
    }
    let d = n.degree().unwrap() as u32;
    let x = (d + 1).div_ceil(k) + 1;
    let xs = all_below(f, x);
    let codec = KeyCodec::new(f, (k * (x - 1)).max(d) as usize + 1)?;
    let pows: Vec<Vec<Fe>> = xs
        .iter()
        .map(|p| codec.dense(&p.pow(k, f)))
        .collect::<Result<_>>()?;
    let target = codec.encode(&codec.dense(n)?);

    // state -> (previous state, summand index)
    let mut parent: HashMap<u128, (u128, usize)> = HashMap::new();
    let mut frontier = vec![0u128];
    parent.insert(0, (0, usize::MAX));
    let mut expanded = 0u64;
    let mut base = vec![Fe::ZERO; codec.len()];
    let mut sum = vec![Fe::ZERO; codec.len()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &key in &frontier {
            expanded += 1;
            if expanded > budget {
                return Ok(None);
            }
            codec.decode(key, &mut base);
            for (i, v) in pows.iter().enumerate() {
                codec.add_into(&base, v, &mut sum);
                let nk = codec.encode(&sum);
                if parent.contains_key(&nk) {
                    continue;
                }
                parent.insert(nk, (key, i));
                if nk == target {
                    let mut out = Vec::new();
                    let mut cur = nk;
                    while cur != 0 {
                        let (prev, idx) = parent[&cur];
                        out.push(xs[idx].clone());
                        cur = prev;
                    }
                    out.reverse();
                    return Ok(Some(out));
                }
                next.push(nk);
            }
        }
        frontier = next;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(n: &Poly, k: u32, f: &Field, w: &[Poly]) {
        let mut acc = Poly::zero();
        for x in w {
            acc = acc.add(&x.pow(k, f), f);
        }
        assert_eq!(&acc, n);
    }

    #[test]
    fn witnesses() {
        let f3 = Field::of_order(3).unwrap();
        let t3 = Poly::monomial(Fe::ONE, 3);
        assert_eq!(
            witness_in_jqk_ring(&t3, 3, &f3, 1000).unwrap(),
            Some(vec![Poly::t()])
        );
        assert_eq!(
            witness_in_jqk_ring(&Poly::zero(), 3, &f3, 1000).unwrap(),
            Some(vec![])
        );
        let n = Poly::parse("2*t^2", &f3).unwrap();
        let w = witness_in_jqk_ring(&n, 2, &f3, 10_000).unwrap().unwrap();
        assert_eq!(w.len(), 2);
        check(&n, 2, &f3, &w);
        // Cubes over F_3[t] have no t^1 term, and neither do their sums.
        assert_eq!(
            witness_in_jqk_ring(&Poly::t(), 3, &f3, 100_000).unwrap(),
            None
        );
    }
}
