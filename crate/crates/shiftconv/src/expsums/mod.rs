//! Complete exponential sums over residue rings: Kloosterman sums, their CRT
//! factors, the normalized mod-p Fourier transform, correlation measurements
//! and exponent-pair bound evaluation.
//!
//! Every sum is evaluated by exact enumeration of units against a precomputed
//! twiddle table, with compensated accumulation. The convention at modulus 1
//! is that a complete sum has exactly one term of value 1, so the CRT
//! identities hold without special cases.

mod baby;
mod correlation;
mod fourier;
mod incomplete;
mod kloosterman;
mod pairs;

pub use baby::{
    baby_s, baby_t, sweep_s_factorization, sweep_t_multiplicativity, verify_s_factorization,
    verify_t_multiplicativity,
};
pub use correlation::{correlation_dichotomy, correlation_t, t_table, CorrelationReport};
pub use fourier::fourier_transform_modp;
pub use incomplete::{incomplete_sum, kloosterman_sweep, TraceFunction};
pub use kloosterman::{kloosterman, kloosterman_normalized, kloosterman_table};
pub(crate) use kloosterman::kloosterman_row;
pub use pairs::{exponent_pair_bound, ExponentPair};

use crate::Complex;

/// Value of a complete exponential sum.
///
/// `term_count` is the number of unit-modulus exponential terms accumulated
/// before any outer prefactor is applied, so `|value| <= term_count` is the
/// triangle inequality.
#[derive(Clone, Copy, Debug)]
pub struct ExpSumValue {
    pub value: Complex,
    pub modulus: u64,
    pub term_count: u64,
}

impl ExpSumValue {
    pub fn triangle_ok(&self) -> bool {
        self.value.norm() <= self.term_count as f64 * (1.0 + 1e-12) + 1e-12
    }
}

/// Table of e(j/c) for j in [0, c).
pub(crate) struct Twiddle {
    c: u64,
    table: Vec<Complex>,
}

impl Twiddle {
    pub fn new(c: u64) -> Self {
        let step = 2.0 * std::f64::consts::PI / c as f64;
        let table = (0..c)
            .map(|j| {
                let ang = step * j as f64;
                Complex::new(ang.cos(), ang.sin())
            })
            .collect();
        Twiddle { c, table }
    }

    #[inline]
    pub fn at(&self, j: u64) -> Complex {
        debug_assert!(j < self.c);
        self.table[j as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twiddle_is_unit_circle() {
        let tw = Twiddle::new(7);
        for j in 0..7 {
            assert!((tw.at(j).norm() - 1.0).abs() < 1e-15);
        }
        assert!((tw.at(0) - Complex::new(1.0, 0.0)).norm() < 1e-15);
    }
}
