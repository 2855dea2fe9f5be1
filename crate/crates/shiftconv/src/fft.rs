//! Thin wrappers around rustfft plus a naive DFT used as a test oracle.
//!
//! rustfft transforms are unnormalized in both directions; callers apply
//! whatever normalization their identity needs.

use crate::Complex;
use rustfft::FftPlanner;
use std::sync::Mutex;

static PLANNER: Mutex<Option<FftPlanner<f64>>> = Mutex::new(None);

fn with_planner<T>(f: impl FnOnce(&mut FftPlanner<f64>) -> T) -> T {
    let mut guard = PLANNER.lock().unwrap();
    let planner = guard.get_or_insert_with(FftPlanner::new);
    f(planner)
}

/// In-place forward transform: `out[k] = sum_j in[j] e(-jk/n)`.
pub fn forward(buf: &mut [Complex]) {
    let fft = with_planner(|p| p.plan_fft_forward(buf.len()));
    fft.process(buf);
}

/// In-place inverse transform without the 1/n factor:
/// `out[k] = sum_j in[j] e(+jk/n)`.
pub fn inverse(buf: &mut [Complex]) {
    let fft = with_planner(|p| p.plan_fft_inverse(buf.len()));
    fft.process(buf);
}

/// Smallest power of two `>= n`.
pub fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

/// Direct O(n^2) DFT with the same convention as [`forward`]; oracle only.
pub fn naive_forward(input: &[Complex]) -> Vec<Complex> {
    let n = input.len();
    let mut out = vec![Complex::new(0.0, 0.0); n];
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = Complex::new(0.0, 0.0);
        for (j, &x) in input.iter().enumerate() {
            let ang = -2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / (n as f64);
            acc += x * Complex::new(ang.cos(), ang.sin());
        }
        *o = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_matches_naive_on_odd_length() {
        let n = 101;
        let input: Vec<Complex> = (0..n)
            .map(|i| Complex::new((i as f64).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let mut buf = input.clone();
        forward(&mut buf);
        let oracle = naive_forward(&input);
        for (a, b) in buf.iter().zip(&oracle) {
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        let n = 240;
        let input: Vec<Complex> = (0..n)
            .map(|i| Complex::new((i as f64 * 0.3).sin(), (i as f64 * 1.1).cos()))
            .collect();
        let mut buf = input.clone();
        forward(&mut buf);
        inverse(&mut buf);
        for (a, b) in buf.iter().zip(&input) {
            assert!((a / n as f64 - b).norm() < 1e-12);
        }
    }
}
