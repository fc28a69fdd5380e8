//! Waring's problem over `F_q[t]`: exact exponential sums, arc
//! classification, representation counts, singular-series predictions and
//! the explicit variable-count thresholds.

pub mod algebra;
pub mod arcs;
pub mod counting;
pub mod error;
pub mod expsums;
pub mod prediction;
pub mod thresholds;
pub mod verify;

pub use algebra::{Fe, Field, FieldConfig, FieldSpec, Laurent, Poly, RationalFn};
pub use arcs::{ArcCenter, ArcClass, ArcParams};
pub use counting::{CountMethod, CountReport, StrictProblem, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use expsums::WaringInstance;
pub use prediction::{ExceptionalScanReport, PredictionReport, Psi};
pub use thresholds::{KCase, ThresholdReport};

/// Crate version, embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
