//! Normalized Fourier transform on Z/qZ:
//! `f^(y) = q^{-1/2} sum_x f(x) e(-yx/q)`.
//!
//! Unitary, so Plancherel is exact and the double transform is the
//! reflection x -> -x.

use super::Twiddle;
use crate::arith::mul_mod;
use crate::{exec, Complex};

/// Transform a full period of values. Works for any modulus (prime in the
/// applications, squarefree composite accepted).
pub fn fourier_transform_modp(f: &[Complex]) -> Vec<Complex> {
    let q = f.len() as u64;
    assert!(q >= 1, "empty table");
    let tw = Twiddle::new(q);
    let scale = 1.0 / (q as f64).sqrt();
    let rows = exec::map_chunks(q as usize, 16, |r| {
        r.map(|y| {
            let mut re = exec::Compensated::default();
            let mut im = exec::Compensated::default();
            for (x, &v) in f.iter().enumerate() {
                // e(-yx/q) = conj(e(yx/q))
                let z = v * tw.at(mul_mod(y as u64, x as u64, q)).conj();
                re.add(z.re);
                im.add(z.im);
            }
            Complex::new(re.value() * scale, im.value() * scale)
        })
        .collect::<Vec<_>>()
    });
    rows.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{primes_below, units_with_inverses};
    use crate::expsums::kloosterman_normalized;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_table(q: usize, seed: u64) -> Vec<Complex> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..q)
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn delta_transforms_to_flat() {
        for p in [7usize, 31, 97] {
            let mut f = vec![Complex::new(0.0, 0.0); p];
            f[0] = Complex::new(1.0, 0.0);
            let ft = fourier_transform_modp(&f);
            let want = 1.0 / (p as f64).sqrt();
            for v in ft {
                assert!((v - Complex::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn involution_is_reflection() {
        for p in primes_below(98) {
            let f = random_table(p as usize, p);
            let ft2 = fourier_transform_modp(&fourier_transform_modp(&f));
            for x in 0..p as usize {
                let neg = (p as usize - x) % p as usize;
                assert!((ft2[x] - f[neg]).norm() < 1e-9, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn plancherel_holds() {
        for p in [13u64, 61, 97] {
            let f = random_table(p as usize, 1000 + p);
            let ft = fourier_transform_modp(&f);
            let a: f64 = f.iter().map(|z| z.norm_sqr()).sum();
            let b: f64 = ft.iter().map(|z| z.norm_sqr()).sum();
            assert!((a - b).abs() <= 1e-9 * a, "p={p}");
        }
    }

    #[test]
    fn kloosterman_spectrum_closed_form() {
        // FT of Kl(.,p) is e(y^{-1}/p) on units and 0 at y = 0.
        for p in [11u64, 43, 83] {
            let f: Vec<Complex> = (0..p)
                .map(|n| Complex::new(kloosterman_normalized(n as i64, p).unwrap(), 0.0))
                .collect();
            let ft = fourier_transform_modp(&f);
            assert!(ft[0].norm() < 1e-9);
            for (y, yi) in units_with_inverses(p) {
                let ang = 2.0 * std::f64::consts::PI * yi as f64 / p as f64;
                let want = Complex::new(ang.cos(), ang.sin());
                assert!((ft[y as usize] - want).norm() < 1e-9, "p={p} y={y}");
            }
        }
    }
}
