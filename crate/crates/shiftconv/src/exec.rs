//! Parallel execution facade.
//!
//! Sweeps are split into fixed-size chunks whose partial results are combined
//! in index order, so a run with 16 workers reduces in exactly the same order
//! as a run with 1. With the `parallel` feature disabled every function here
//! degrades to a plain sequential loop.

use crate::Complex;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default chunk length for index sweeps. Large enough to amortize task
/// dispatch, small enough to load-balance uneven kernels.
pub const CHUNK: usize = 2048;

/// Map `f` over `0..n` in fixed chunks, collecting chunk results in order.
pub fn map_chunks<T, F>(n: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let ranges: Vec<_> = (0..n)
        .step_by(chunk)
        .map(|lo| lo..(lo + chunk).min(n))
        .collect();
    #[cfg(feature = "parallel")]
    {
        ranges.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ranges.into_iter().map(f).collect()
    }
}

/// Map `f` over items independently, preserving input order.
pub fn map_items<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Fill a freshly allocated `Vec<f64>` by writing disjoint chunks in parallel.
pub fn fill_f64<F>(n: usize, chunk: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let mut out = vec![0.0f64; n];
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    {
        out.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, dst)| f(i * chunk, dst));
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (i, dst) in out.chunks_mut(chunk).enumerate() {
            f(i * chunk, dst);
        }
    }
    out
}

/// Neumaier-compensated accumulator; cheap insurance for long sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Compensated complex sum of `f(i)` for `i in 0..n`, chunked and reduced in
/// index order.
pub fn sum_complex<F>(n: usize, f: F) -> Complex
where
    F: Fn(usize) -> Complex + Sync + Send,
{
    let partials = map_chunks(n, CHUNK, |r| {
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for i in r {
            let z = f(i);
            re.add(z.re);
            im.add(z.im);
        }
        Complex::new(re.value(), im.value())
    });
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    for p in partials {
        re.add(p.re);
        im.add(p.im);
    }
    Complex::new(re.value(), im.value())
}

/// Compensated real sum of `f(i)` for `i in 0..n`.
pub fn sum_f64<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let partials = map_chunks(n, CHUNK, |r| {
        let mut acc = Compensated::default();
        for i in r {
            acc.add(f(i));
        }
        acc.value()
    });
    let mut acc = Compensated::default();
    for p in partials {
        acc.add(p);
    }
    acc.value()
}

/// Maximum of `f(i)` over `0..n` (NaN-free inputs assumed).
pub fn max_f64<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let partials = map_chunks(n, CHUNK, |r| {
        let mut m = f64::NEG_INFINITY;
        for i in r {
            m = m.max(f(i));
        }
        m
    });
    partials.into_iter().fold(f64::NEG_INFINITY, f64::max)
}
