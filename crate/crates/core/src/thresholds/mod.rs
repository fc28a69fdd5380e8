//! Characteristic-`p` combinatorics of the exponent `k` and the explicit
//! variable-count thresholds.

mod bounds;
mod lucas;
mod sets;
mod weyl;

pub use bounds::{
    bounds_table, closed_forms, delta0_of, rational_string, s1_of, small_k_stated_bounds,
    threshold_report, u2_of, BoundValue, EtaRow, ThresholdReport, TABLE_COLUMNS,
};
#[doc(hidden)]
pub use lucas::inject_lucas_fault;
pub use lucas::{binom_mod_p, digits, h0_of, is_maximal, k_star, precedes_p, shadow};
pub use sets::{build_sets, check_condition_star, j0_closed, j0_of, j0_scan, ExponentSets, KCase};
pub use weyl::{weyl_diff, MultiPoly};
