//! Overlapping-interval circle method: flexible moduli sets, the exact
//! step-function form of the covering kernel, its variance against the flat
//! density, and the step-weighted correlation integral.

mod dstar;
mod moduli;
mod step;

pub use dstar::{dstar_gap, dstar_h};
pub use moduli::{build_moduli_set, ModuliMode, ModuliSet};
pub use step::{eval_i, variance, StepFunction};
