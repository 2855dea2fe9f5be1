//! Arithmetic exponent pairs and the bound they give for incomplete sums of
//! composite trace functions: (q/|I|)^kappa |I|^lambda delta^nu ||W^||^mu.
//!
//! The q^epsilon factor is not modeled; callers compare measured sums against
//! the epsilon-free right-hand side and report the constant.

use crate::error::{Error, Result};
use num_rational::Rational64;
use num_traits::ToPrimitive;

/// An admissible exponent tuple (kappa, lambda, nu, mu).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentPair {
    pub kappa: Rational64,
    pub lambda: Rational64,
    pub nu: Rational64,
    pub mu: Rational64,
}

impl ExponentPair {
    /// Construct with the sanity range 0 <= kappa <= 1/2, kappa <= lambda <= 1.
    pub fn new(kappa: Rational64, lambda: Rational64, nu: Rational64, mu: Rational64) -> Result<Self> {
        let half = Rational64::new(1, 2);
        let one = Rational64::new(1, 1);
        if kappa < Rational64::new(0, 1) || kappa > half {
            return Err(Error::Range(format!("kappa = {kappa} outside [0, 1/2]")));
        }
        if lambda < kappa || lambda > one {
            return Err(Error::Range(format!(
                "lambda = {lambda} outside [kappa, 1]"
            )));
        }
        Ok(ExponentPair { kappa, lambda, nu, mu })
    }

    /// The trivial pair (0,1,0,0): the bound degenerates to |I|.
    pub fn trivial() -> Self {
        ExponentPair {
            kappa: Rational64::new(0, 1),
            lambda: Rational64::new(1, 1),
            nu: Rational64::new(0, 1),
            mu: Rational64::new(0, 1),
        }
    }

    /// The three admissible tuples used in the estimates:
    /// (1/2,1/2,1/2,1), (11/30,16/30,1/6,1), (2/18,13/18,11/28,0).
    pub fn standard() -> [Self; 3] {
        [
            ExponentPair {
                kappa: Rational64::new(1, 2),
                lambda: Rational64::new(1, 2),
                nu: Rational64::new(1, 2),
                mu: Rational64::new(1, 1),
            },
            ExponentPair {
                kappa: Rational64::new(11, 30),
                lambda: Rational64::new(16, 30),
                nu: Rational64::new(1, 6),
                mu: Rational64::new(1, 1),
            },
            ExponentPair {
                kappa: Rational64::new(2, 18),
                lambda: Rational64::new(13, 18),
                nu: Rational64::new(11, 28),
                mu: Rational64::new(0, 1),
            },
        ]
    }
}

/// Evaluate the right-hand side of the exponent-pair inequality for concrete
/// parameters. Requires |I| < q * delta.
pub fn exponent_pair_bound(
    pair: &ExponentPair,
    q: f64,
    interval_len: f64,
    delta: f64,
    w_hat_inf: f64,
) -> Result<f64> {
    if !(interval_len < q * delta) {
        return Err(Error::Range(format!(
            "|I| = {interval_len} must be < q delta = {}",
            q * delta
        )));
    }
    if q <= 0.0 || interval_len <= 0.0 || delta <= 0.0 || w_hat_inf < 0.0 {
        return Err(Error::Range("parameters must be positive".into()));
    }
    let e = |r: Rational64| r.to_f64().unwrap();
    Ok((q / interval_len).powf(e(pair.kappa))
        * interval_len.powf(e(pair.lambda))
        * delta.powf(e(pair.nu))
        * w_hat_inf.powf(e(pair.mu)))
}
