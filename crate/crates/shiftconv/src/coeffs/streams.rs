//! Normalized coefficient streams and their Hecke-structure checks.

use super::tau::{ramanujan_tau_cached, tau3_sieve};
use crate::error::{Error, Result};
use crate::report::SumReport;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StreamKind {
    /// lambda_2(n) = tau(n) / n^{11/2}: the unitary weight-12 stream.
    Gl2HolomorphicDelta,
    /// A(1,n) of the symmetric-square lift of the weight-12 form.
    Gl3Sym2Lift,
    /// tau_3(n), the Eisenstein-type proxy.
    Gl3Tau3Proxy,
}

impl StreamKind {
    pub fn tag(&self) -> &'static str {
        match self {
            StreamKind::Gl2HolomorphicDelta => "gl2-holomorphic-delta",
            StreamKind::Gl3Sym2Lift => "gl3-sym2-lift",
            StreamKind::Gl3Tau3Proxy => "gl3-tau3-proxy",
        }
    }

    /// Exact kinds are cached as 64-bit integers.
    pub fn is_exact(&self) -> bool {
        matches!(self, StreamKind::Gl3Tau3Proxy)
    }
}

/// A prefix of a normalized coefficient sequence, 1-indexed.
#[derive(Clone, Debug)]
pub struct CoefficientStream {
    kind: StreamKind,
    /// values[0] is unused padding; values[n] is the n-th coefficient.
    values: Vec<f64>,
    provenance: String,
}

impl CoefficientStream {
    pub(crate) fn from_values(kind: StreamKind, values: Vec<f64>, provenance: String) -> Self {
        debug_assert!(values.len() >= 2 && (values[1] - 1.0).abs() < 1e-9);
        CoefficientStream { kind, values, provenance }
    }

    pub fn kind(&self) -> StreamKind {
        self.kind
    }

    /// Largest index carried by the stream.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    #[inline]
    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn try_value(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.len() {
            return Err(Error::Range(format!(
                "index {n} outside stream of length {}",
                self.len()
            )));
        }
        Ok(self.values[n])
    }

    /// The raw 1-indexed buffer, padding included.
    pub fn raw(&self) -> &[f64] {
        &self.values
    }

    pub fn require_len(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            return Err(Error::StreamTooShort { needed, len: self.len() });
        }
        Ok(())
    }
}

/// The unitary GL(2) stream lambda_2(n) = tau(n)/n^{11/2}.
pub fn lambda_gl2(n: usize) -> CoefficientStream {
    let tau = ramanujan_tau_cached(n);
    let mut values = vec![0.0f64; n + 1];
    for m in 1..=n {
        values[m] = tau[m] as f64 / (m as f64).powf(5.5);
    }
    CoefficientStream::from_values(
        StreamKind::Gl2HolomorphicDelta,
        values,
        "tau(n)/n^5.5 from the weight-12 eta-power expansion".into(),
    )
}

/// The symmetric-square lift A(1,n), built multiplicatively from prime-power
/// values; at p^k the value is sum over j <= k, j ≡ k mod 2 of lambda_2(p^{2j}),
/// with lambda_2 at prime powers from the Hecke recurrence.
pub fn sym2_lift(n: usize) -> CoefficientStream {
    assert!(n >= 1 && n <= super::MAX_STREAM_LEN);
    let tau = ramanujan_tau_cached(n.max(2));
    let lam_p = |p: usize| tau[p] as f64 / (p as f64).powf(5.5);

    // smallest prime factor sieve
    let mut spf = vec![0u32; n + 1];
    let mut i = 2usize;
    while i <= n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        i += 1;
    }

    let mut values = vec![0.0f64; n + 1];
    if n >= 1 {
        values[1] = 1.0;
    }
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut rest = m;
        let mut k = 0usize;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if rest > 1 {
            values[m] = values[m / rest] * values[rest];
        } else {
            // prime power p^k: lambda_2(p^r) for r <= 2k by recurrence
            let lp = lam_p(p);
            let mut lam_prev = 1.0f64; // lambda(p^0)
            let mut lam_cur = lp; // lambda(p^1)
            let mut lam_at = vec![1.0f64, lp];
            for _ in 2..=2 * k {
                let nxt = lp * lam_cur - lam_prev;
                lam_prev = lam_cur;
                lam_cur = nxt;
                lam_at.push(lam_cur);
            }
            let mut v = 0.0f64;
            let mut j = k as i64;
            while j >= 0 {
                v += lam_at[2 * j as usize];
                j -= 2;
            }
            values[m] = v;
        }
    }
    CoefficientStream::from_values(
        StreamKind::Gl3Sym2Lift,
        values,
        "symmetric-square lift of the weight-12 form, multiplicative sieve".into(),
    )
}

/// The ternary divisor stream, exact integers in f64.
pub fn tau3(n: usize) -> CoefficientStream {
    let d3 = tau3_sieve(n);
    let mut values = vec![0.0f64; n + 1];
    for m in 1..=n {
        values[m] = d3[m] as f64;
    }
    CoefficientStream::from_values(
        StreamKind::Gl3Tau3Proxy,
        values,
        "ternary divisor function by double divisor sieve".into(),
    )
}

/// Full two-index coefficient via inverse Hecke multiplicativity:
/// lambda(m1,m2) = sum over d | (m1,m2) of mu(d) lambda(m1/d,1) lambda(1,m2/d),
/// with the self-dual convention lambda(m,1) = lambda(1,m).
pub fn lambda1_full(m1: usize, m2: usize, stream: &CoefficientStream) -> Result<f64> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::Range("indices must be positive".into()));
    }
    stream.require_len(m1.max(m2))?;
    let g = crate::arith::gcd(m1 as u64, m2 as u64) as usize;
    let mut acc = 0.0f64;
    for d in 1..=g {
        if g % d != 0 {
            continue;
        }
        let mu = crate::arith::moebius(d as u64);
        if mu == 0 {
            continue;
        }
        acc += mu as f64 * stream.value(m1 / d) * stream.value(m2 / d);
    }
    Ok(acc)
}

/// Second-moment growth check: ratios sum_{n<=N} v(n)^2 / N over the doubling
/// ladder N, N/2, N/4, N/8. Pass requires every ratio <= 100 and each
/// doubling step to grow by at most 2.5x.
pub fn second_moment_check(stream: &CoefficientStream, n: usize) -> Result<SumReport> {
    stream.require_len(n)?;
    let mut ladder = vec![n];
    while *ladder.last().unwrap() >= 16 && ladder.len() < 4 {
        ladder.push(ladder.last().unwrap() / 2);
    }
    ladder.reverse();
    let mut ratios = Vec::new();
    for &m in &ladder {
        let s: f64 = (1..=m).map(|i| stream.value(i) * stream.value(i)).sum();
        ratios.push(s / m as f64);
    }
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let mut growth_ok = true;
    for w in ratios.windows(2) {
        if w[1] > 2.5 * w[0] {
            growth_ok = false;
        }
    }
    let mut report = SumReport::new("second-moment", max_ratio, 100.0)
        .pass(max_ratio <= 100.0 && growth_ok)
        .param("kind", stream.kind().tag())
        .param("n", n);
    for (i, (&m, &r)) in ladder.iter().zip(&ratios).enumerate() {
        report = report.param(&format!("ratio_{i}_at_{m}"), r);
    }
    Ok(report)
}
