pub mod config;
pub mod field;
pub mod laurent;
pub mod poly;
pub mod quadrature;

pub use config::FieldConfig;
pub use field::{is_prime, jqk_closure, Fe, Field, FieldSpec};
pub use laurent::{char_e, laurent_of_ratio, laurent_of_rational, Laurent, RationalFn};
pub use poly::{all_below, count_below, enumerate_below, enumerate_range, nth_below, Poly};
pub use quadrature::{det_sum, quadrature_t, round_to_integer, INTEGER_TOL};
