//! The doubly-windowed shifted convolution at every shift at once, by FFT
//! cross-correlation, plus the Parseval identity that checks it.

use super::windowed_sequence;
use crate::coeffs::CoefficientStream;
use crate::error::{Error, Result};
use crate::report::SumReport;
use crate::windows::SmoothWindow;
use crate::{exec, fft, Complex};

/// D~_h(X) for every shift h in [-3X, 3X].
#[derive(Clone, Debug)]
pub struct ShiftSpectrum {
    pub x: f64,
    pub h_min: i64,
    pub h_max: i64,
    values: Vec<Complex>,
}

impl ShiftSpectrum {
    pub fn value(&self, h: i64) -> Complex {
        if h < self.h_min || h > self.h_max {
            return Complex::new(0.0, 0.0);
        }
        self.values[(h - self.h_min) as usize]
    }

    pub fn shifts(&self) -> impl Iterator<Item = i64> + '_ {
        self.h_min..=self.h_max
    }

    /// sum over the stored range of |D~_h|^2.
    pub fn energy(&self) -> f64 {
        let vals = &self.values;
        exec::sum_f64(vals.len(), |i| vals[i].norm_sqr())
    }

    pub fn max_abs(&self) -> f64 {
        let vals = &self.values;
        exec::max_f64(vals.len(), |i| vals[i].norm())
    }

    /// CSV rows `h,re,im,abs` for export.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,re,im,abs\n");
        for h in self.shifts() {
            let v = self.value(h);
            out.push_str(&format!("{h},{:.12e},{:.12e},{:.12e}\n", v.re, v.im, v.norm()));
        }
        out
    }
}

/// D~_h(X) = sum_m lambda1(1,m) lambda2(m+h) V(m/X) W((m+h)/X), exactly.
///
/// Agrees with the single-window sum whenever the plateau of W covers
/// [X + h, 2X + h], i.e. for -X/3 <= h <= X/2.
pub fn shifted_conv_direct(
    h: i64,
    x: f64,
    gl3: &CoefficientStream,
    gl2: &CoefficientStream,
) -> Result<Complex> {
    if h.unsigned_abs() as f64 > 3.0 * x {
        return Err(Error::Range(format!("|h| = {} exceeds 3X = {}", h.abs(), 3.0 * x)));
    }
    let v = SmoothWindow::v_bump();
    let w = SmoothWindow::w_plateau();
    let gl2_hi = (3.0 * x).ceil() as i64;
    let m_lo = (x.floor() as i64).max(1).max(1 - h);
    let m_hi = ((2.0 * x).ceil() as i64).min(gl2_hi - h);
    gl3.require_len((2.0 * x).ceil() as usize)?;
    gl2.require_len(gl2_hi as usize)?;
    let mut acc = exec::Compensated::default();
    for m in m_lo..=m_hi {
        let vm = v.eval(m as f64 / x);
        if vm == 0.0 {
            continue;
        }
        let wn = w.eval((m + h) as f64 / x);
        if wn == 0.0 {
            continue;
        }
        acc.add(gl3.value(m as usize) * gl2.value((m + h) as usize) * vm * wn);
    }
    Ok(Complex::new(acc.value(), 0.0))
}

/// The whole spectrum in O(X log X): one forward transform per stream,
/// conjugate pointwise multiply, one inverse transform of length the next
/// power of two past 8X.
pub fn shifted_conv_all(
    x: f64,
    gl3: &CoefficientStream,
    gl2: &CoefficientStream,
) -> Result<ShiftSpectrum> {
    let a1 = windowed_sequence(gl3, &SmoothWindow::v_bump(), x)?;
    let a2 = windowed_sequence(gl2, &SmoothWindow::w_plateau(), x)?;
    let len = fft::next_pow2((8.0 * x).ceil() as usize);
    let mut f1: Vec<Complex> = vec![Complex::new(0.0, 0.0); len];
    let mut f2 = f1.clone();
    for (i, &c) in a1.iter().enumerate() {
        f1[i].re = c;
    }
    for (i, &c) in a2.iter().enumerate() {
        f2[i].re = c;
    }
    fft::forward(&mut f1);
    fft::forward(&mut f2);
    for (u, v) in f1.iter_mut().zip(&f2) {
        *u = u.conj() * v;
    }
    fft::inverse(&mut f1);
    let scale = 1.0 / len as f64;

    let reach = (3.0 * x).ceil() as i64;
    let values = (-reach..=reach)
        .map(|h| f1[h.rem_euclid(len as i64) as usize] * scale)
        .collect();
    Ok(ShiftSpectrum {
        x,
        h_min: -reach,
        h_max: reach,
        values,
    })
}

/// Both sides of the shift-sum / integral identity:
/// sum_h |D~_h|^2 = integral over [0,1] of |S1 S2|^2.
///
/// The right side is evaluated by the exact rectangle rule: the integrand is
/// a trigonometric polynomial of degree < L, so L equally spaced samples
/// integrate it exactly. The two sides go through different FFT pipelines,
/// so agreement is a real check of the correlation machinery.
pub fn parseval_check(
    x: f64,
    gl3: &CoefficientStream,
    gl2: &CoefficientStream,
) -> Result<SumReport> {
    let spectrum = shifted_conv_all(x, gl3, gl2)?;
    let lhs = spectrum.energy();

    let a1 = windowed_sequence(gl3, &SmoothWindow::v_bump(), x)?;
    let a2 = windowed_sequence(gl2, &SmoothWindow::w_plateau(), x)?;
    let len = fft::next_pow2((8.0 * x).ceil() as usize);
    let mut s1: Vec<Complex> = vec![Complex::new(0.0, 0.0); len];
    let mut s2 = s1.clone();
    for (i, &c) in a1.iter().enumerate() {
        s1[i].re = c;
    }
    for (i, &c) in a2.iter().enumerate() {
        s2[i].re = c;
    }
    // S1(j/L) has phase sign +, S2(j/L) sign -
    fft::inverse(&mut s1);
    fft::forward(&mut s2);
    let rhs = exec::sum_f64(len, |j| (s1[j] * s2[j]).norm_sqr()) / len as f64;

    let denom = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    let rel = (lhs - rhs).abs() / denom;
    Ok(SumReport::new("parseval", rel, 1e-6)
        .pass(rel <= 1e-6)
        .param("x", x)
        .param("lhs_energy", lhs)
        .param("rhs_integral", rhs)
        .param("energy_over_x2", lhs / (x * x)))
}
