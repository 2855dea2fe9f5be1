//! Exact integer coefficient generators: Ramanujan tau via the cube of
//! Euler's product, and the ternary divisor function by sieve.

use crate::exec;
use std::sync::{Arc, Mutex};

static TAU_MEMO: Mutex<Option<Arc<Vec<i128>>>> = Mutex::new(None);

/// Memoized tau: reuses the longest prefix computed so far in this process.
/// The lock is held during computation so concurrent callers coalesce.
pub fn ramanujan_tau_cached(n: usize) -> Arc<Vec<i128>> {
    let mut guard = TAU_MEMO.lock().unwrap();
    if let Some(t) = guard.as_ref() {
        if t.len() > n {
            return Arc::clone(t);
        }
    }
    let t = Arc::new(ramanujan_tau(n));
    *guard = Some(Arc::clone(&t));
    t
}

/// tau(1..=n), exact in i128.
///
/// Delta = q prod (1-q^m)^24 = q * J^8 where J = eta^3 (without the q^{1/8})
/// has the sparse expansion sum_k (-1)^k (2k+1) q^{k(k+1)/2}. One
/// sparse-by-sparse square followed by six sparse multiplies keeps the whole
/// computation at O(n sqrt n) integer operations; i128 accommodates the
/// growth |tau(n)| <= d(n) n^{11/2} up to n = 10^6.
pub fn ramanujan_tau(n: usize) -> Vec<i128> {
    assert!(n >= 1 && n <= super::MAX_STREAM_LEN, "tau length {n} out of range");
    let len = n; // coefficients of q^0 .. q^{n-1} of J^8
    let mut sparse: Vec<(usize, i128)> = Vec::new();
    let mut k = 0usize;
    while k * (k + 1) / 2 < len {
        let c = (2 * k + 1) as i128;
        sparse.push((k * (k + 1) / 2, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }

    // J^2, sparse x sparse
    let mut cur = vec![0i128; len];
    for &(i, ci) in &sparse {
        for &(j, cj) in &sparse {
            if i + j >= len {
                break;
            }
            cur[i + j] += ci * cj;
        }
    }

    // six more factors of J, dense x sparse, parallel over output chunks
    for _ in 0..6 {
        let src = cur;
        let chunks = exec::map_chunks(len, 16_384, |r| {
            let mut out = vec![0i128; r.len()];
            for &(off, c) in &sparse {
                if off > r.end - 1 {
                    break;
                }
                let lo = r.start.max(off);
                for idx in lo..r.end {
                    out[idx - r.start] += c * src[idx - off];
                }
            }
            out
        });
        cur = chunks.concat();
    }

    let mut tau = vec![0i128; n + 1];
    for m in 1..=n {
        tau[m] = cur[m - 1];
    }
    tau
}

/// tau_3(1..=n): the number of ordered triples (a,b,c) with abc = m,
/// by two divisor-convolution sieves.
pub fn tau3_sieve(n: usize) -> Vec<u64> {
    assert!(n >= 1 && n <= super::MAX_STREAM_LEN);
    let mut d2 = vec![0u64; n + 1];
    for i in 1..=n {
        for j in (i..=n).step_by(i) {
            d2[j] += 1;
        }
    }
    let mut d3 = vec![0u64; n + 1];
    for i in 1..=n {
        for j in (i..=n).step_by(i) {
            d3[j] += d2[j / i];
        }
    }
    d3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd;

    #[test]
    fn known_values() {
        let t = ramanujan_tau(24);
        let expected: [i128; 12] = [
            1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944,
        ];
        for (i, &v) in expected.iter().enumerate() {
            assert_eq!(t[i + 1], v, "tau({})", i + 1);
        }
    }

    /// Independent oracle: expand prod (1 - q^m)^24 by brute force, one
    /// factor at a time, no pentagonal or Jacobi shortcut.
    #[test]
    fn matches_bruteforce_product_expansion() {
        let n = 200usize;
        let mut poly = vec![0i128; n];
        poly[0] = 1;
        for m in 1..n {
            for _ in 0..24 {
                // multiply by (1 - q^m)
                for idx in (m..n).rev() {
                    let sub = poly[idx - m];
                    poly[idx] -= sub;
                }
            }
        }
        let t = ramanujan_tau(n);
        for m in 1..=n - 1 {
            assert_eq!(t[m], poly[m - 1], "tau({m})");
        }
    }

    #[test]
    fn multiplicative_on_coprime_pairs() {
        let n = 10_000usize;
        let t = ramanujan_tau(n);
        for m in 2..200usize {
            for k in 2..200usize {
                if m * k <= n && gcd(m as u64, k as u64) == 1 {
                    assert_eq!(t[m * k], t[m] * t[k], "m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn hecke_recursion_at_prime_squares() {
        let t = ramanujan_tau(10_000);
        for p in [2i128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
                  71, 73, 79, 83, 89, 97] {
            let p11 = p.pow(11);
            assert_eq!(t[(p * p) as usize], t[p as usize] * t[p as usize] - p11, "p={p}");
        }
    }

    #[test]
    fn tau3_small_values_and_sieve_oracle() {
        let d3 = tau3_sieve(100);
        assert_eq!(d3[1], 1);
        for p in [2usize, 3, 5, 7, 11] {
            assert_eq!(d3[p], 3);
        }
        assert_eq!(d3[12], 18);
        // brute-force triple count
        for m in 1..=60usize {
            let mut count = 0u64;
            for a in 1..=m {
                for b in 1..=m {
                    if a * b > m || m % (a * b) != 0 {
                        continue;
                    }
                    count += 1;
                }
            }
            assert_eq!(d3[m], count, "m={m}");
        }
    }

    #[test]
    fn tau3_multiplicative() {
        let d3 = tau3_sieve(10_000);
        for m in 2..100usize {
            for k in 2..100usize {
                if m * k <= 10_000 && gcd(m as u64, k as u64) == 1 {
                    assert_eq!(d3[m * k], d3[m] * d3[k]);
                }
            }
        }
    }
}
