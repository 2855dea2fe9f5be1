//! The shifted-convolution surface: resonance sums against additive
//! characters, the all-shift correlation spectrum, and the average
//! cancellation measurements tying them together.

mod averages;
mod resonance;
mod spectrum;

pub use averages::{decay_exponent_fit, smoothed_average, DecayFit};
pub use resonance::{resonance_gl2, resonance_gl3, resonance_sup, ResonanceSide};
pub use spectrum::{parseval_check, shifted_conv_all, shifted_conv_direct, ShiftSpectrum};

use crate::coeffs::CoefficientStream;
use crate::error::Result;
use crate::windows::SmoothWindow;

/// lambda(m) w(m/X) for m in 0..=ceil(hi*X); zero outside the window support.
pub(crate) fn windowed_sequence(
    stream: &CoefficientStream,
    window: &SmoothWindow,
    x: f64,
) -> Result<Vec<f64>> {
    let hi = (window.support.1 * x).ceil() as usize;
    stream.require_len(hi)?;
    let mut out = vec![0.0f64; hi + 1];
    let lo = ((window.support.0 * x).floor() as usize).max(1);
    for m in lo..=hi {
        let w = window.eval(m as f64 / x);
        if w != 0.0 {
            out[m] = stream.value(m) * w;
        }
    }
    Ok(out)
}
