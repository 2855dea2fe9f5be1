//! Resonance sums sum_n lambda(n) e(±x n) w(n/X) and their sup over an
//! alpha-grid of uniform points plus low-denominator rationals, where the
//! peaks live.

use super::windowed_sequence;
use crate::arith::gcd;
use crate::coeffs::CoefficientStream;
use crate::error::Result;
use crate::report::SumReport;
use crate::windows::SmoothWindow;
use crate::{exec, fft, Complex};

/// Which factor of the correlation integrand is being measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResonanceSide {
    /// sum lambda1(1,m) e(+x m) V(m/X); square-root cancellation scale X^{3/4}.
    Gl3V,
    /// sum lambda2(n) e(-x n) W(n/X); scale X^{1/2}.
    Gl2W,
}

impl ResonanceSide {
    fn window(&self) -> SmoothWindow {
        match self {
            ResonanceSide::Gl3V => SmoothWindow::v_bump(),
            ResonanceSide::Gl2W => SmoothWindow::w_plateau(),
        }
    }

    fn phase_sign(&self) -> f64 {
        match self {
            ResonanceSide::Gl3V => 1.0,
            ResonanceSide::Gl2W => -1.0,
        }
    }

    pub fn scale(&self, x: f64) -> f64 {
        match self {
            ResonanceSide::Gl3V => x.powf(0.75),
            ResonanceSide::Gl2W => x.sqrt(),
        }
    }
}

/// Point evaluation with one rotation per term, re-anchored periodically so
/// phase drift stays below the enumeration roundoff.
fn resonance_point(seq: &[f64], alpha: f64, sign: f64) -> Complex {
    let two_pi = 2.0 * std::f64::consts::PI;
    let step = Complex::new((two_pi * sign * alpha).cos(), (two_pi * sign * alpha).sin());
    let mut re = exec::Compensated::default();
    let mut im = exec::Compensated::default();
    let mut z = Complex::new(1.0, 0.0);
    for (n, &c) in seq.iter().enumerate() {
        if n % 1024 == 0 {
            let ang = two_pi * sign * alpha * n as f64;
            z = Complex::new(ang.cos(), ang.sin());
        }
        if c != 0.0 {
            re.add(c * z.re);
            im.add(c * z.im);
        }
        z *= step;
    }
    Complex::new(re.value(), im.value())
}

/// S1(alpha, X) = sum lambda1(1,m) e(alpha m) V(m/X).
pub fn resonance_gl3(alpha: f64, x: f64, stream: &CoefficientStream) -> Result<Complex> {
    let seq = windowed_sequence(stream, &SmoothWindow::v_bump(), x)?;
    Ok(resonance_point(&seq, alpha, 1.0))
}

/// S2(alpha, X) = sum lambda2(n) e(-alpha n) W(n/X).
pub fn resonance_gl2(alpha: f64, x: f64, stream: &CoefficientStream) -> Result<Complex> {
    let seq = windowed_sequence(stream, &SmoothWindow::w_plateau(), x)?;
    Ok(resonance_point(&seq, alpha, -1.0))
}

/// Sup of the resonance sum over the alpha-grid: 16 X equally spaced points
/// (one DFT of length 16 X) plus every reduced fraction a/q with q <= sqrt(X)
/// (bucketed DFT per q). Reports sup / scale as the measured constant.
pub fn resonance_sup(side: ResonanceSide, x: f64, stream: &CoefficientStream) -> Result<SumReport> {
    let seq = windowed_sequence(stream, &side.window(), x)?;
    let sign = side.phase_sign();

    // uniform grid by one length-16X transform
    let grid_len = (16.0 * x).round() as usize;
    let mut buf = vec![Complex::new(0.0, 0.0); grid_len];
    for (n, &c) in seq.iter().enumerate() {
        if c != 0.0 {
            buf[n % grid_len] += Complex::new(c, 0.0);
        }
    }
    if sign < 0.0 {
        fft::forward(&mut buf);
    } else {
        fft::inverse(&mut buf);
    }
    let mut best = (0.0f64, 0.0f64); // (value, alpha)
    for (j, v) in buf.iter().enumerate() {
        let norm = v.norm();
        if norm > best.0 {
            best = (norm, j as f64 / grid_len as f64);
        }
    }

    // all Farey points with denominator up to sqrt(X)
    let qmax = x.sqrt().floor() as u64;
    let farey_best = exec::map_items((1..=qmax).collect::<Vec<_>>(), |q| {
        let qi = q as usize;
        let mut buckets = vec![0.0f64; qi];
        for (n, &c) in seq.iter().enumerate() {
            if c != 0.0 {
                buckets[n % qi] += c;
            }
        }
        let tw_step = 2.0 * std::f64::consts::PI / q as f64;
        let mut local = (0.0f64, 0.0f64);
        for a in 0..q {
            if q > 1 && gcd(a, q) != 1 {
                continue;
            }
            if q == 1 && a > 0 {
                continue;
            }
            let mut acc = Complex::new(0.0, 0.0);
            for (r, &b) in buckets.iter().enumerate() {
                if b != 0.0 {
                    let ang = sign * tw_step * ((a as u64 * r as u64) % q) as f64;
                    acc += b * Complex::new(ang.cos(), ang.sin());
                }
            }
            let norm = acc.norm();
            if norm > local.0 {
                local = (norm, a as f64 / q as f64);
            }
        }
        local
    });
    for cand in farey_best {
        if cand.0 > best.0 {
            best = cand;
        }
    }

    let scale = side.scale(x);
    Ok(SumReport::new("resonance-sup", best.0, scale)
        .param("x", x)
        .param("alpha_at_max", best.1)
        .param("grid_points", grid_len)
        .param("farey_qmax", qmax)
        .param(
            "side",
            match side {
                ResonanceSide::Gl3V => "gl3-v",
                ResonanceSide::Gl2W => "gl2-w",
            },
        ))
}
