//! Kloosterman sums S(m,n;c) by exact enumeration, their Weil-normalized
//! variant, and the all-residues table built through an FFT.

use super::{ExpSumValue, Twiddle};
use crate::arith::{add_mod, euler_phi, is_squarefree, mul_mod, reduce, units_with_inverses};
use crate::error::{Error, Result};
use crate::{exec, fft, Complex};

/// S(m,n;c) = sum over units x mod c of e((m x + n x^{-1}) / c).
///
/// Pairing x with -x makes the value real; the imaginary part is kept as a
/// roundoff witness.
pub fn kloosterman(m: i64, n: i64, c: u64) -> ExpSumValue {
    assert!(c >= 1, "modulus must be positive");
    let units = units_with_inverses(c);
    let tw = Twiddle::new(c);
    let mr = reduce(m, c);
    let nr = reduce(n, c);
    let value = exec::sum_complex(units.len(), |i| {
        let (x, xi) = units[i];
        tw.at(add_mod(mul_mod(mr, x, c), mul_mod(nr, xi, c), c))
    });
    ExpSumValue {
        value,
        modulus: c,
        term_count: units.len() as u64,
    }
}

/// Kl(n,q) = S(n,1;q)/sqrt(q) for squarefree q >= 3. Real by construction;
/// bounded by tau(q).
pub fn kloosterman_normalized(n: i64, q: u64) -> Result<f64> {
    if q < 3 {
        return Err(Error::Range(format!("modulus {q} < 3")));
    }
    if !is_squarefree(q) {
        return Err(Error::NotSquarefree(q));
    }
    let s = kloosterman(n, 1, q);
    debug_assert!(s.value.im.abs() <= 1e-9 * euler_phi(q) as f64);
    Ok(s.value.re / (q as f64).sqrt())
}

/// Row S(m, t; d) for t in [0, d), by direct enumeration.
pub(crate) fn kloosterman_row(m: i64, d: u64) -> Vec<Complex> {
    let units = units_with_inverses(d);
    let tw = Twiddle::new(d);
    let mr = reduce(m, d);
    (0..d)
        .map(|t| {
            let mut re = exec::Compensated::default();
            let mut im = exec::Compensated::default();
            for &(y, yi) in &units {
                let z = tw.at(add_mod(mul_mod(mr, y, d), mul_mod(t, yi, d), d));
                re.add(z.re);
                im.add(z.im);
            }
            Complex::new(re.value(), im.value())
        })
        .collect()
}

/// Table of S(n,1;q) for every n mod q, in O(q log q).
///
/// As a function of n, S(n,1;q) = sum_y f(y) e(ny/q) with f the unit
/// indicator times e(y^{-1}/q), i.e. one unnormalized inverse DFT.
pub fn kloosterman_table(q: u64) -> Vec<Complex> {
    let tw = Twiddle::new(q);
    let mut buf = vec![Complex::new(0.0, 0.0); q as usize];
    for (y, yi) in units_with_inverses(q) {
        buf[y as usize] = tw.at(yi);
    }
    fft::inverse(&mut buf);
    buf
}
