//! Fixtures shared by the benchmarks.

use ffwaring::algebra::{laurent_of_ratio, Field, Laurent, Poly};
use ffwaring::counting::StrictProblem;
use ffwaring::WaringInstance;

pub fn field(q: u32) -> Field {
    Field::of_order(q).expect("prime power")
}

/// `(t + 1) / (t^3 + 2)` expanded to the given depth.
pub fn sample_alpha(f: &Field, depth: i64) -> Laurent {
    let num = Poly::from_ints(f, &[1, 1]);
    let den = Poly::from_ints(f, &[2, 0, 0, 1]);
    laurent_of_ratio(&num, &den, depth, f).expect("nonzero denominator")
}

pub fn problem(q: u32, k: u32, s: u32, n: &[i64]) -> StrictProblem {
    let f = field(q);
    let target = Poly::from_ints(&f, n);
    let inst = WaringInstance::new(f, k, s).expect("valid instance");
    StrictProblem::new(inst, target).expect("valid problem")
}
