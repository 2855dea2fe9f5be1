//! Incomplete sums of composite trace functions over an interval, against a
//! bounded periodic weight.

use super::correlation::t_table;
use super::kloosterman::kloosterman_table;
use super::ExpSumValue;
use crate::arith::{is_squarefree, reduce, squarefree_factor};
use crate::error::{Error, Result};
use crate::report::SumReport;
use crate::{exec, Complex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The trace functions the measurements instantiate. A closed enumeration,
/// not a general DSL: the normalized Kloosterman function mod squarefree q,
/// and products T(a1,b1,·;p) conj T(a2,b2,·;p).
#[derive(Clone, Debug)]
pub enum TraceFunction {
    Kloosterman { q: u64 },
    TProduct { p: u64, a1: i64, b1: i64, a2: i64, b2: i64 },
}

impl TraceFunction {
    pub fn period(&self) -> u64 {
        match self {
            TraceFunction::Kloosterman { q } => *q,
            TraceFunction::TProduct { p, .. } => *p,
        }
    }

    /// One full period of values.
    pub fn values(&self) -> Result<Vec<Complex>> {
        match self {
            TraceFunction::Kloosterman { q } => {
                if *q < 3 {
                    return Err(Error::Range(format!("modulus {q} < 3")));
                }
                if !is_squarefree(*q) {
                    return Err(Error::NotSquarefree(*q));
                }
                let scale = 1.0 / (*q as f64).sqrt();
                Ok(kloosterman_table(*q).into_iter().map(|v| v * scale).collect())
            }
            TraceFunction::TProduct { p, a1, b1, a2, b2 } => {
                let t1 = t_table(*a1, *b1, *p);
                let t2 = t_table(*a2, *b2, *p);
                Ok(t1.iter().zip(&t2).map(|(u, v)| u * v.conj()).collect())
            }
        }
    }
}

/// Sum of K(n) W(n mod delta) over the inclusive interval [lo, hi].
///
/// The weight must satisfy max |W| <= 1; its period is `w.len()`.
pub fn incomplete_sum(k: &TraceFunction, lo: i64, hi: i64, w: &[Complex]) -> Result<ExpSumValue> {
    if w.is_empty() {
        return Err(Error::Range("weight table is empty".into()));
    }
    let winf = w.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if winf > 1.0 + 1e-9 {
        return Err(Error::Range(format!("||W||_inf = {winf} exceeds 1")));
    }
    let q = k.period();
    let table = k.values()?;
    if hi < lo {
        return Ok(ExpSumValue {
            value: Complex::new(0.0, 0.0),
            modulus: q,
            term_count: 0,
        });
    }
    let delta = w.len() as u64;
    let len = (hi - lo + 1) as usize;
    let value = exec::sum_complex(len, |i| {
        let n = lo + i as i64;
        table[reduce(n, q) as usize] * w[reduce(n, delta) as usize]
    });
    Ok(ExpSumValue {
        value,
        modulus: q,
        term_count: len as u64,
    })
}

/// Empirical sweep: |sum over random subintervals of Kl(·,q)| against
/// sqrt(q) log q, the square-root-cancellation scale. Reports the measured
/// constant per interval; the largest ratio is the headline number.
pub fn kloosterman_sweep(q: u64, intervals: u32, seed: u64) -> Result<Vec<SumReport>> {
    squarefree_factor(q)?;
    let k = TraceFunction::Kloosterman { q };
    let table = k.values()?;
    let scale = (q as f64).sqrt() * (q as f64).ln().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs = Vec::with_capacity(intervals as usize);
    for _ in 0..intervals {
        let len = rng.gen_range(1..=q);
        let lo = rng.gen_range(0..q);
        specs.push((lo as i64, (lo + len - 1) as i64));
    }
    Ok(exec::map_items(specs, move |(lo, hi)| {
        let len = (hi - lo + 1) as usize;
        let value = exec::sum_complex(len, |i| {
            let n = lo + i as i64;
            table[reduce(n, q) as usize]
        });
        SumReport::new("kloosterman-interval", value.norm(), scale)
            .param("q", q)
            .param("lo", lo)
            .param("hi", hi)
    }))
}
