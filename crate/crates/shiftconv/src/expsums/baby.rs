//! CRT factors of Kloosterman sums: the twisted sum S(h,n,m;c,d), the
//! normalized T(a,b,m;c), and exact verification of the factorization and
//! twisted-multiplicativity identities they satisfy.

use super::kloosterman::kloosterman_row;
use super::{ExpSumValue, Twiddle};
use crate::arith::{
    add_mod, euler_phi, gcd, inv_allow_one, is_squarefree, mul_mod, reduce, squarefree_factor,
    units_with_inverses,
};
use crate::error::{Error, Result};
use crate::report::SumReport;
use crate::{exec, Complex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative tolerance for the identity checks; absorbs roundoff of the
/// enumeration on both sides.
pub const IDENTITY_RTOL: f64 = 1e-6;

/// S(h,n,m;c,d) = sum over units x mod c of S(m,x;d) e((h x^{-1} - n x)/c),
/// for d | c. The inner Kloosterman sums are evaluated exactly.
pub fn baby_s(h: i64, n: i64, m: i64, c: u64, d: u64) -> Result<ExpSumValue> {
    if d == 0 || c % d != 0 {
        return Err(Error::NotDivisor { d, c });
    }
    let inner = kloosterman_row(m, d);
    let units = units_with_inverses(c);
    let tw = Twiddle::new(c);
    let hr = reduce(h, c);
    let n_neg = reduce(-n, c);
    let value = exec::sum_complex(units.len(), |i| {
        let (x, xi) = units[i];
        inner[(x % d) as usize] * tw.at(add_mod(mul_mod(hr, xi, c), mul_mod(n_neg, x, c), c))
    });
    Ok(ExpSumValue {
        value,
        modulus: c,
        term_count: euler_phi(c) * euler_phi(d),
    })
}

/// T(a,b,m;c) = (1/c) sum over units x mod c of S(x^{-1}+a, -b; c) e(-m x/c).
pub fn baby_t(a: i64, b: i64, m: i64, c: u64) -> ExpSumValue {
    let units = units_with_inverses(c);
    let tw = Twiddle::new(c);
    let value = baby_t_impl(a, b, m, c, &units, &tw);
    ExpSumValue {
        value,
        modulus: c,
        term_count: euler_phi(c) * euler_phi(c),
    }
}

fn baby_t_impl(a: i64, b: i64, m: i64, c: u64, units: &[(u64, u64)], tw: &Twiddle) -> Complex {
    let ar = reduce(a, c);
    let b_neg = reduce(-b, c);
    let m_neg = reduce(-m, c);
    let value = exec::sum_complex(units.len(), |i| {
        let (x, xi) = units[i];
        let u = add_mod(xi, ar, c);
        // S(u, -b; c) by direct enumeration over the same unit list
        let mut re = exec::Compensated::default();
        let mut im = exec::Compensated::default();
        for &(y, yi) in units {
            let z = tw.at(add_mod(mul_mod(u, y, c), mul_mod(b_neg, yi, c), c));
            re.add(z.re);
            im.add(z.im);
        }
        Complex::new(re.value(), im.value()) * tw.at(mul_mod(m_neg, x, c))
    });
    value / c as f64
}

/// Check S(h,n,m; d*l, d) = d · S(h, -n dbar^2; l) · T(n lbar, h lbar, m; d)
/// for coprime (d, l) with d*l squarefree.
pub fn verify_s_factorization(h: i64, n: i64, m: i64, d: u64, l: u64) -> Result<SumReport> {
    if gcd(d, l) != 1 {
        return Err(Error::Range(format!("(d,l)=({d},{l}) not coprime")));
    }
    let c = d * l;
    squarefree_factor(c)?;
    let lhs = baby_s(h, n, m, c, d)?.value;

    let dbar = inv_allow_one(d % l.max(1), l) as i64;
    let lbar = inv_allow_one(l % d.max(1), d) as i64;
    let kl = super::kloosterman(h, -(n.rem_euclid(l as i64)) * dbar * dbar, l).value;
    let t = baby_t(n * lbar, h * lbar, m, d).value;
    let rhs = kl * t * d as f64;

    let diff = (lhs - rhs).norm();
    let bound = IDENTITY_RTOL * (1.0 + lhs.norm());
    Ok(SumReport::new("s-factorization", diff, bound)
        .pass(diff <= bound)
        .param("h", h)
        .param("n", n)
        .param("m", m)
        .param("d", d)
        .param("l", l)
        .param("lhs_re", lhs.re)
        .param("lhs_im", lhs.im)
        .param("rhs_re", rhs.re)
        .param("rhs_im", rhs.im))
}

/// Check T(a,b,m;c1 c2) = T(a, b c2bar^2, m c2bar; c1) · T(a, b c1bar^2, m c1bar; c2)
/// for coprime (c1, c2) with c1 c2 squarefree.
pub fn verify_t_multiplicativity(a: i64, b: i64, m: i64, c1: u64, c2: u64) -> Result<SumReport> {
    if gcd(c1, c2) != 1 {
        return Err(Error::Range(format!("(c1,c2)=({c1},{c2}) not coprime")));
    }
    let c = c1 * c2;
    squarefree_factor(c)?;
    let lhs = baby_t(a, b, m, c).value;

    let c2bar = inv_allow_one(c2 % c1.max(1), c1) as i64;
    let c1bar = inv_allow_one(c1 % c2.max(1), c2) as i64;
    let rhs = baby_t(a, b * c2bar * c2bar, m * c2bar, c1).value
        * baby_t(a, b * c1bar * c1bar, m * c1bar, c2).value;

    let diff = (lhs - rhs).norm();
    let bound = IDENTITY_RTOL * (1.0 + lhs.norm());
    Ok(SumReport::new("t-multiplicativity", diff, bound)
        .pass(diff <= bound)
        .param("a", a)
        .param("b", b)
        .param("m", m)
        .param("c1", c1)
        .param("c2", c2)
        .param("lhs_re", lhs.re)
        .param("lhs_im", lhs.im))
}

/// All ordered coprime pairs (d, l) with d*l squarefree and d*l <= max.
fn coprime_squarefree_pairs(max: u64) -> Vec<(u64, u64)> {
    let mut pairs = Vec::new();
    for c in 1..=max {
        if !is_squarefree(c) {
            continue;
        }
        for d in 1..=c {
            if c % d == 0 {
                pairs.push((d, c / d));
            }
        }
    }
    pairs
}

/// Sweep the factorization identity: exhaustive in (h,n,m) mod c for
/// c = d*l <= `exhaustive_max`, `samples` random triples per pair for larger
/// c up to `max_modulus`. One report per (d, l) pair carrying the worst
/// deviation observed.
pub fn sweep_s_factorization(
    max_modulus: u64,
    exhaustive_max: u64,
    samples: u32,
    seed: u64,
) -> Vec<SumReport> {
    let pairs = coprime_squarefree_pairs(max_modulus);
    exec::map_items(pairs, move |(d, l)| {
        let c = d * l;
        let (max_diff, max_bound, count) = if c <= exhaustive_max {
            s_pair_exhaustive(d, l)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c << 24) ^ (d << 4));
            let mut worst = (0.0f64, IDENTITY_RTOL);
            for _ in 0..samples {
                let h = rng.gen_range(0..c) as i64;
                let n = rng.gen_range(0..c) as i64;
                let m = rng.gen_range(0..c) as i64;
                let r = verify_s_factorization(h, n, m, d, l).expect("coprime by construction");
                if r.value / r.bound > worst.0 / worst.1 {
                    worst = (r.value, r.bound);
                }
            }
            (worst.0, worst.1, samples as u64)
        };
        SumReport::new("s-factorization-pair", max_diff, max_bound)
            .pass(max_diff <= max_bound)
            .param("d", d)
            .param("l", l)
            .param("triples", count)
            .param(
                "mode",
                if c <= exhaustive_max {
                    "exhaustive"
                } else {
                    "random"
                },
            )
    })
}

/// Exhaustive check of the factorization identity over all (h,n,m) mod c,
/// via precomputed Kloosterman and T tables. Returns the worst
/// (difference, allowed bound) and the triple count.
fn s_pair_exhaustive(d: u64, l: u64) -> (f64, f64, u64) {
    let c = d * l;
    let units_c = units_with_inverses(c);
    let tw_c = Twiddle::new(c);
    let sd = kloosterman_grid(d);
    let sl = kloosterman_grid(l);
    let tt = t_grid(d);
    let dbar = inv_allow_one(d % l.max(1), l);
    let lbar = inv_allow_one(l % d.max(1), d);
    let dbar2 = mul_mod(dbar, dbar, l.max(1));

    let mut max_diff = 0.0f64;
    let mut bound_at_max = IDENTITY_RTOL;
    for m in 0..c {
        let inner = &sd[(m % d) as usize];
        for h in 0..c {
            let hr = h;
            let t_b = mul_mod(h % d, lbar, d.max(1));
            let sl_row = &sl[(h % l) as usize];
            for n in 0..c {
                let n_neg = (c - n) % c;
                let mut re = exec::Compensated::default();
                let mut im = exec::Compensated::default();
                for &(x, xi) in &units_c {
                    let z = inner[(x % d) as usize]
                        * tw_c.at(add_mod(mul_mod(hr, xi, c), mul_mod(n_neg, x, c), c));
                    re.add(z.re);
                    im.add(z.im);
                }
                let lhs = Complex::new(re.value(), im.value());
                let w = if l == 1 {
                    0
                } else {
                    mul_mod((l - n % l) % l, dbar2, l)
                };
                let t_a = mul_mod(n % d, lbar, d.max(1));
                let rhs =
                    sl_row[w as usize] * tt[grid_index(d, t_a, t_b, m % d)] * d as f64;
                let diff = (lhs - rhs).norm();
                if diff > max_diff {
                    max_diff = diff;
                    bound_at_max = IDENTITY_RTOL * (1.0 + lhs.norm());
                }
            }
        }
    }
    (max_diff, bound_at_max, c * c * c)
}

/// Full grid S(u,v;d) for u,v in [0,d)^2.
fn kloosterman_grid(d: u64) -> Vec<Vec<Complex>> {
    (0..d).map(|u| kloosterman_row(u as i64, d)).collect()
}

#[inline]
fn grid_index(d: u64, a: u64, b: u64, m: u64) -> usize {
    ((a * d + b) * d + m) as usize
}

/// Full grid T(a,b,m;d) for (a,b,m) in [0,d)^3.
fn t_grid(d: u64) -> Vec<Complex> {
    let units = units_with_inverses(d);
    let tw = Twiddle::new(d);
    let sd = kloosterman_grid(d);
    let mut out = vec![Complex::new(0.0, 0.0); (d * d * d) as usize];
    for a in 0..d {
        for b in 0..d {
            let b_neg = (d - b) % d;
            for m in 0..d {
                let m_neg = (d - m) % d;
                let mut acc = Complex::new(0.0, 0.0);
                for &(x, xi) in &units {
                    let u = add_mod(xi, a, d);
                    acc += sd[u as usize][b_neg as usize] * tw.at(mul_mod(m_neg, x, d));
                }
                out[grid_index(d, a, b, m)] = acc / d as f64;
            }
        }
    }
    out
}

/// Sweep twisted multiplicativity of T over coprime squarefree (c1, c2):
/// exhaustive in (a,b,m) mod c for c = c1 c2 <= `exhaustive_max`, random
/// triples above.
pub fn sweep_t_multiplicativity(
    max_modulus: u64,
    exhaustive_max: u64,
    samples: u32,
    seed: u64,
) -> Vec<SumReport> {
    let pairs = coprime_squarefree_pairs(max_modulus);
    exec::map_items(pairs, move |(c1, c2)| {
        let c = c1 * c2;
        let (max_diff, max_bound, count) = if c <= exhaustive_max {
            t_pair_exhaustive(c1, c2)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c << 24) ^ (c1 << 4) ^ 1);
            let mut worst = (0.0f64, IDENTITY_RTOL);
            for _ in 0..samples {
                let a = rng.gen_range(0..c) as i64;
                let b = rng.gen_range(0..c) as i64;
                let m = rng.gen_range(0..c) as i64;
                let r = verify_t_multiplicativity(a, b, m, c1, c2).expect("coprime");
                if r.value / r.bound > worst.0 / worst.1 {
                    worst = (r.value, r.bound);
                }
            }
            (worst.0, worst.1, samples as u64)
        };
        SumReport::new("t-multiplicativity-pair", max_diff, max_bound)
            .pass(max_diff <= max_bound)
            .param("c1", c1)
            .param("c2", c2)
            .param("triples", count)
    })
}

fn t_pair_exhaustive(c1: u64, c2: u64) -> (f64, f64, u64) {
    let c = c1 * c2;
    let t_full = t_grid(c);
    let t1 = t_grid(c1);
    let t2 = t_grid(c2);
    let c2bar = inv_allow_one(c2 % c1.max(1), c1);
    let c1bar = inv_allow_one(c1 % c2.max(1), c2);
    let c2bar2 = mul_mod(c2bar, c2bar, c1.max(1));
    let c1bar2 = mul_mod(c1bar, c1bar, c2.max(1));

    let mut max_diff = 0.0f64;
    let mut bound_at_max = IDENTITY_RTOL;
    for a in 0..c {
        for b in 0..c {
            let b1 = mul_mod(b % c1, c2bar2, c1.max(1));
            let b2 = mul_mod(b % c2, c1bar2, c2.max(1));
            for m in 0..c {
                let lhs = t_full[grid_index(c, a, b, m)];
                let m1 = mul_mod(m % c1, c2bar, c1.max(1));
                let m2 = mul_mod(m % c2, c1bar, c2.max(1));
                let rhs = t1[grid_index(c1, a % c1, b1, m1)] * t2[grid_index(c2, a % c2, b2, m2)];
                let diff = (lhs - rhs).norm();
                if diff > max_diff {
                    max_diff = diff;
                    bound_at_max = IDENTITY_RTOL * (1.0 + lhs.norm());
                }
            }
        }
    }
    (max_diff, bound_at_max, c * c * c)
}
