//! Correlation of T(a,b,·;p) kernels across parameter tuples.
//!
//! Off-diagonal tuples decorrelate with square-root cancellation; diagonal
//! tuples give a mean square of order 1. Measured, not asserted from theory:
//! the dichotomy sweep reports the worst normalized correlation it saw.

use super::kloosterman::kloosterman_row;
use crate::arith::{mul_mod, primes_below, reduce, units_with_inverses};
use crate::error::{Error, Result};
use crate::{exec, fft, Complex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Result of one correlation measurement between two T-kernels mod p.
///
/// `rho` is the average (1/p) sum over y of T(a1,b1,y;p) conj T(a2,b2,y;p);
/// with that normalization the diagonal is of order 1 while off-diagonal
/// tuples decay like p^{-1/2}. `normalized` is `rho` itself on the diagonal
/// and |rho| sqrt(p) off it.
#[derive(Clone, Debug, Serialize)]
pub struct CorrelationReport {
    pub p: u64,
    pub tuple1: (i64, i64),
    pub tuple2: (i64, i64),
    pub rho_re: f64,
    pub rho_im: f64,
    pub normalized: f64,
    pub diagonal: bool,
}

impl CorrelationReport {
    pub fn rho(&self) -> Complex {
        Complex::new(self.rho_re, self.rho_im)
    }
}

/// Table of T(a,b,m;p) for every m mod p, via one DFT of length p.
///
/// The generating function x -> S(x^{-1}+a, -b; p) is assembled from the
/// single-row Kloosterman table using S(u,v;p) = S(1,uv;p) for unit u.
pub fn t_table(a: i64, b: i64, p: u64) -> Vec<Complex> {
    let k1 = kloosterman_row(1, p);
    let units = units_with_inverses(p);
    let ar = reduce(a, p);
    let b_neg = reduce(-b, p);
    let mut buf = vec![Complex::new(0.0, 0.0); p as usize];
    for (x, xi) in units {
        let u = (xi + ar) % p;
        buf[x as usize] = if u == 0 {
            // S(0, -b; p): Ramanujan sum
            if b_neg == 0 {
                Complex::new(p as f64 - 1.0, 0.0)
            } else {
                Complex::new(-1.0, 0.0)
            }
        } else {
            k1[mul_mod(u, b_neg, p) as usize]
        };
    }
    fft::forward(&mut buf);
    for v in buf.iter_mut() {
        *v /= p as f64;
    }
    buf
}

/// Average correlation of two T-kernels mod p. Rejects p | b1 b2.
pub fn correlation_t(a1: i64, b1: i64, a2: i64, b2: i64, p: u64) -> Result<CorrelationReport> {
    if reduce(b1, p) == 0 || reduce(b2, p) == 0 {
        return Err(Error::Range(format!("p={p} divides b1 b2")));
    }
    let t1 = t_table(a1, b1, p);
    let t2 = t_table(a2, b2, p);
    let rho = exec::sum_complex(p as usize, |y| t1[y] * t2[y].conj()) / p as f64;
    let diagonal = reduce(a1, p) == reduce(a2, p) && reduce(b1, p) == reduce(b2, p);
    let normalized = if diagonal {
        rho.re
    } else {
        rho.norm() * (p as f64).sqrt()
    };
    Ok(CorrelationReport {
        p,
        tuple1: (a1, b1),
        tuple2: (a2, b2),
        rho_re: rho.re,
        rho_im: rho.im,
        normalized,
        diagonal,
    })
}

/// Sweep the correlation dichotomy over all primes p ≡ 2 mod 3 in
/// (p_lo, p_hi): one diagonal tuple plus `off_diag` random off-diagonal
/// tuples per prime.
pub fn correlation_dichotomy(
    p_lo: u64,
    p_hi: u64,
    off_diag: u32,
    seed: u64,
) -> Vec<CorrelationReport> {
    let primes: Vec<u64> = primes_below(p_hi)
        .into_iter()
        .filter(|&p| p > p_lo && p % 3 == 2)
        .collect();
    let per_prime = exec::map_items(primes, move |p| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 17));
        let mut out = Vec::with_capacity(off_diag as usize + 1);
        let a = rng.gen_range(0..p) as i64;
        let b = rng.gen_range(1..p) as i64;
        out.push(correlation_t(a, b, a, b, p).expect("b is a unit"));
        let mut produced = 0;
        while produced < off_diag {
            let a1 = rng.gen_range(0..p) as i64;
            let b1 = rng.gen_range(1..p) as i64;
            let a2 = rng.gen_range(0..p) as i64;
            let b2 = rng.gen_range(1..p) as i64;
            if a1 == a2 && b1 == b2 {
                continue;
            }
            out.push(correlation_t(a1, b1, a2, b2, p).expect("units"));
            produced += 1;
        }
        out
    });
    per_prime.into_iter().flatten().collect()
}
