//! Exact modular arithmetic, squarefree factorization and CRT utilities.
//!
//! All products go through 128-bit intermediates so moduli up to 2^63 never
//! overflow. Residues are canonicalized to `[0, m)` on entry.

use crate::error::{Error, Result};

/// Squarefree modulus together with its (distinct) prime factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    modulus: u64,
    primes: Vec<u64>,
}

impl Factorization {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Divisor count; 2^(number of prime factors) for squarefree moduli.
    pub fn tau(&self) -> u64 {
        1u64 << self.primes.len()
    }
}

/// `(a + b) mod m` without overflow for `a, b < m < 2^63`.
#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

/// `(a * b) mod m` through a 128-bit product.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Canonical residue of a signed value.
#[inline]
pub fn reduce(a: i64, m: u64) -> u64 {
    let m_i = m as i128;
    let r = (a as i128).rem_euclid(m_i);
    r as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Multiplicative inverse of `a` mod `m`, in `[1, m)`.
///
/// Rejects non-coprime inputs; callers use that to surface violated
/// coprimality side conditions rather than silently continuing.
pub fn mod_inv(a: i64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::Range(format!("modulus {m} < 2 in mod_inv")));
    }
    let a0 = reduce(a, m);
    let g = gcd(a0, m);
    if g != 1 {
        return Err(Error::NotCoprime {
            a,
            modulus: m,
            gcd: g,
        });
    }
    // extended Euclid on (a0, m)
    let (mut old_r, mut r) = (a0 as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    let inv = old_s.rem_euclid(m as i128) as u64;
    debug_assert_eq!(mul_mod(a0, inv, m), 1);
    Ok(inv)
}

/// Inverse that tolerates modulus 1 (everything is 0 ≡ 1 there); used by the
/// exponential-sum kernels where the CRT identities need `S(·,·;1) = 1`.
pub(crate) fn inv_allow_one(a: u64, m: u64) -> u64 {
    if m == 1 {
        0
    } else {
        mod_inv(a as i64, m).expect("caller guarantees coprimality")
    }
}

/// Trial-division factorization of a squarefree integer.
///
/// Returns the prime list, or a rejection when `n` has a square factor.
/// `n = 1` yields the empty product.
pub fn squarefree_factor(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Range("0 has no factorization".into()));
    }
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Err(Error::NotSquarefree(n));
            }
            primes.push(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        primes.push(m);
    }
    Ok(Factorization { modulus: n, primes })
}

/// Is `n` squarefree?
pub fn is_squarefree(n: u64) -> bool {
    squarefree_factor(n).is_ok()
}

/// Euler phi of `n` by trial division (not restricted to squarefree `n`).
pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut phi = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            phi -= phi / p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// Moebius function; 0 for non-squarefree `n`.
pub fn moebius(n: u64) -> i64 {
    match squarefree_factor(n) {
        Ok(f) => {
            if f.primes().len() % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Err(_) => 0,
    }
}

/// Residues of `x` modulo each prime of `f`, in the order of `f.primes()`.
pub fn crt_split(x: u64, f: &Factorization) -> Vec<u64> {
    f.primes().iter().map(|&p| x % p).collect()
}

/// Inverse of [`crt_split`]: the unique residue mod `f.modulus()` matching
/// every per-prime residue.
pub fn crt_recombine(residues: &[u64], f: &Factorization) -> u64 {
    let m = f.modulus();
    let mut x = 0u64;
    for (&r, &p) in residues.iter().zip(f.primes()) {
        let q = m / p;
        let qinv = inv_allow_one(q % p, p);
        // x += r * q * (q^{-1} mod p), all mod m
        let t = mul_mod(mul_mod(r % p, qinv, m), q, m);
        x = add_mod(x, t, m);
    }
    if m == 1 {
        0
    } else {
        x
    }
}

/// Primes below `limit`, by sieve of Eratosthenes.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut is_comp = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !is_comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                is_comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Units of `Z/cZ` paired with their inverses. For `c = 1` the single residue
/// 0 counts as a unit with inverse 0, so that complete sums over units mod 1
/// have exactly one term.
pub fn units_with_inverses(c: u64) -> Vec<(u64, u64)> {
    if c == 1 {
        return vec![(0, 0)];
    }
    let mut out = Vec::with_capacity(euler_phi(c) as usize);
    for x in 1..c {
        if gcd(x, c) == 1 {
            out.push((x, inv_allow_one(x, c)));
        }
    }
    out
}
