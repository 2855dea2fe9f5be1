//! Dual summation for the unitary weight-12 coefficient stream: the Bessel
//! kernel, the twisted-sum identity relating both sides, and the decay of the
//! underlying integral transform.

mod bessel;
mod summation;

pub use bessel::bessel_j;
pub use summation::{
    default_truncation, transform_decay_check, voronoi_check, voronoi_lhs, voronoi_rhs,
    VoronoiTestCase,
};
