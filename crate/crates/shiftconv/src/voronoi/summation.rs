//! The twisted-sum duality for the unitary weight-12 stream:
//!
//!   sum_n lambda(n) e(an/q) h(n)
//!     = (2 pi i^k / q) sum_n lambda(n) e(-abar n/q) int h(x) J_{k-1}(4 pi sqrt(nx)/q) dx
//!
//! with k = 12 and h a bump supported on [Y, 2Y]. The constant and signs are
//! validated end to end by the agreement test, not by citation. Dual
//! integrals are evaluated in the variable u = sqrt(x), where the oscillation
//! 4 pi sqrt(n) u / q has constant frequency, with Gauss-Legendre panels at
//! three per period.

use super::bessel::bessel_j;
use crate::arith::{gcd, mod_inv, reduce};
use crate::coeffs::CoefficientStream;
use crate::error::{Error, Result};
use crate::report::SumReport;
use crate::windows::SmoothWindow;
use crate::{exec, Complex};

/// Holomorphic weight of the stream; i^k = 1.
const WEIGHT: u32 = 12;

const GL_NODES: [f64; 16] = [
    -0.989_400_934_991_649_9,
    -0.944_575_023_073_232_6,
    -0.865_631_202_387_831_7,
    -0.755_404_408_355_003_0,
    -0.617_876_244_402_643_7,
    -0.458_016_777_657_227_4,
    -0.281_603_550_779_258_9,
    -0.095_012_509_837_637_44,
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003_0,
    0.865_631_202_387_831_7,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL_WEIGHTS: [f64; 16] = [
    0.027_152_459_411_754_096,
    0.062_253_523_938_647_894,
    0.095_158_511_682_492_78,
    0.124_628_971_255_533_87,
    0.149_595_988_816_576_73,
    0.169_156_519_395_002_54,
    0.182_603_415_044_923_59,
    0.189_450_610_455_068_5,
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_59,
    0.169_156_519_395_002_54,
    0.149_595_988_816_576_73,
    0.124_628_971_255_533_87,
    0.095_158_511_682_492_78,
    0.062_253_523_938_647_894,
    0.027_152_459_411_754_096,
];

/// One test case of the duality.
#[derive(Clone, Copy, Debug)]
pub struct VoronoiTestCase {
    pub a: i64,
    pub q: u64,
    pub y: f64,
    pub truncation: usize,
}

impl VoronoiTestCase {
    pub fn new(a: i64, q: u64, y: f64, truncation: usize) -> Result<Self> {
        if q == 0 || (q > 1 && gcd(reduce(a, q), q) != 1) {
            return Err(Error::Range(format!("a = {a} not coprime to q = {q}")));
        }
        if y < 8.0 {
            return Err(Error::Range(format!("window scale Y = {y} too small")));
        }
        Ok(VoronoiTestCase { a, q, y, truncation })
    }
}

/// Dual terms are negligible once the phase across the window reaches many
/// cycles; this default keeps the tail below 1e-6 of the head for q <= 10 at
/// desk-scale Y.
pub fn default_truncation(q: u64, y: f64) -> usize {
    let q2 = (q * q) as f64;
    (2000.0 * q2 / y).ceil().max(300.0) as usize
}

/// Asymptotic effective support of the dual sum (up to the epsilon power,
/// modeled by a logarithm). Truncating below this raises the warn flag.
pub fn effective_support(q: u64, y: f64) -> usize {
    let q2 = (q * q) as f64;
    (q2 * (q as f64 * y).ln().max(1.0) / y).ceil().max(16.0) as usize
}

/// Direct side: sum lambda(n) e(an/q) h(n) with h(n) = V(n/Y).
pub fn voronoi_lhs(tc: &VoronoiTestCase, stream: &CoefficientStream) -> Result<Complex> {
    let hi = (2.0 * tc.y).ceil() as usize;
    stream.require_len(hi)?;
    let v = SmoothWindow::v_bump();
    let ar = reduce(tc.a, tc.q);
    let q = tc.q as f64;
    let lo = tc.y.floor() as usize;
    let value = exec::sum_complex(hi - lo + 1, |i| {
        let n = lo + i;
        let w = v.eval(n as f64 / tc.y);
        if w == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        let ang = 2.0 * std::f64::consts::PI * ((ar as u128 * n as u128) % tc.q as u128) as f64 / q;
        stream.value(n) * w * Complex::new(ang.cos(), ang.sin())
    });
    Ok(value)
}

/// The transform of the window against the order-(k-1) kernel:
/// int h(x) J_{k-1}(4 pi sqrt(n x) / q) dx, in the u = sqrt(x) variable.
fn dual_integral(n: u64, q: u64, y: f64) -> f64 {
    let omega = 4.0 * std::f64::consts::PI * (n as f64).sqrt() / q as f64;
    let ulo = y.sqrt();
    let uhi = (2.0 * y).sqrt();
    let period = 2.0 * std::f64::consts::PI / omega;
    let panels = (((uhi - ulo) / (period / 3.0)).ceil() as usize).max(8);
    let v = SmoothWindow::v_bump();
    let mut acc = exec::Compensated::default();
    let pw = (uhi - ulo) / panels as f64;
    for p in 0..panels {
        let a = ulo + p as f64 * pw;
        let mid = a + 0.5 * pw;
        let half = 0.5 * pw;
        for (node, weight) in GL_NODES.iter().zip(&GL_WEIGHTS) {
            let u = mid + half * node;
            let w = v.eval(u * u / y);
            if w != 0.0 {
                acc.add(weight * half * 2.0 * u * w * bessel_j(WEIGHT - 1, omega * u));
            }
        }
    }
    acc.value()
}

/// Dual side: (2 pi i^k / q) sum_{n <= truncation} lambda(n) e(-abar n/q) I_n.
/// Returns the value and the warn flag for truncation below the effective
/// support.
pub fn voronoi_rhs(tc: &VoronoiTestCase, stream: &CoefficientStream) -> Result<(Complex, bool)> {
    stream.require_len(tc.truncation)?;
    let abar = if tc.q == 1 {
        0
    } else {
        mod_inv(tc.a, tc.q)?
    };
    let q = tc.q as f64;
    let terms = exec::map_items((1..=tc.truncation as u64).collect::<Vec<_>>(), |n| {
        let integral = dual_integral(n, tc.q, tc.y);
        let ang = -2.0 * std::f64::consts::PI
            * ((abar as u128 * n as u128) % tc.q as u128) as f64
            / q;
        stream.value(n as usize) * integral * Complex::new(ang.cos(), ang.sin())
    });
    let mut re = exec::Compensated::default();
    let mut im = exec::Compensated::default();
    for t in terms {
        re.add(t.re);
        im.add(t.im);
    }
    // i^12 = 1
    let prefactor = 2.0 * std::f64::consts::PI / q;
    let value = Complex::new(re.value(), im.value()) * prefactor;
    let warn = tc.truncation < effective_support(tc.q, tc.y);
    Ok((value, warn))
}

/// Compare both sides; PASS at 1e-4 relative.
pub fn voronoi_check(tc: &VoronoiTestCase, stream: &CoefficientStream) -> Result<SumReport> {
    let lhs = voronoi_lhs(tc, stream)?;
    let (rhs, warn) = voronoi_rhs(tc, stream)?;
    let denom = lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
    let rel = (lhs - rhs).norm() / denom;
    Ok(SumReport::new("voronoi-gl2", rel, 1e-4)
        .pass(rel <= 1e-4)
        .warn(warn)
        .param("a", tc.a)
        .param("q", tc.q)
        .param("y", tc.y)
        .param("truncation", tc.truncation)
        .param("lhs_re", lhs.re)
        .param("lhs_im", lhs.im)
        .param("rhs_re", rhs.re)
        .param("rhs_im", rhs.im))
}

/// Decay of H(y) = int h(x) J_{k-1}(4 pi sqrt(x y)) dx for h at scale Y:
/// reports the flat-regime constant and fits the decay exponent A in
/// |H| ~ (yY)^{-A} over the grid points beyond yY = 10.
pub fn transform_decay_check(y_scale: f64, y_grid: &[f64]) -> SumReport {
    let mut flat_c: f64 = 0.0;
    let mut fit_points = Vec::new();
    let mut floored = 0usize;
    let mut entries = Vec::new();
    for &t in y_grid {
        // H(t) with kernel argument 4 pi sqrt(x t): matches dual_integral at
        // q = 1, n ~ t; evaluate directly with omega = 4 pi sqrt(t)
        let h = decay_transform(t, y_scale);
        let yy = t * y_scale;
        entries.push((yy, h.abs()));
        if yy <= 0.01 {
            flat_c = flat_c.max(h.abs() / y_scale);
        } else if yy >= 10.0 {
            let floor = 1e-12 * y_scale;
            if h.abs() > floor {
                fit_points.push((yy.ln(), h.abs().ln()));
            } else {
                floored += 1;
            }
        }
    }
    let fitted_a = if fit_points.len() >= 2 {
        let n = fit_points.len() as f64;
        let sx: f64 = fit_points.iter().map(|p| p.0).sum();
        let sy: f64 = fit_points.iter().map(|p| p.1).sum();
        let sxx: f64 = fit_points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = fit_points.iter().map(|p| p.0 * p.1).sum();
        -(n * sxy - sx * sy) / (n * sxx - sx * sx)
    } else {
        f64::NAN
    };
    let mut report = SumReport::new("transform-decay", fitted_a, 3.0)
        .pass(fitted_a >= 3.0)
        .warn(fit_points.len() < 2)
        .param("y_scale", y_scale)
        .param("flat_constant", flat_c)
        .param("floored_points", floored);
    for (i, (yy, h)) in entries.iter().enumerate() {
        report = report.param(&format!("h_{i}_at_yy_{yy:.3}"), *h);
    }
    report.ratio = fitted_a / 3.0;
    report
}

fn decay_transform(t: f64, y_scale: f64) -> f64 {
    if t <= 0.0 {
        // J_{11}(0) = 0
        return 0.0;
    }
    dual_integral_scaled(t, y_scale)
}

/// int h(x) J_{k-1}(4 pi sqrt(x t)) dx in the u = sqrt(x) variable.
fn dual_integral_scaled(t: f64, y: f64) -> f64 {
    let omega = 4.0 * std::f64::consts::PI * t.sqrt();
    let ulo = y.sqrt();
    let uhi = (2.0 * y).sqrt();
    let period = 2.0 * std::f64::consts::PI / omega;
    let panels = (((uhi - ulo) / (period / 3.0)).ceil() as usize).max(8);
    let v = SmoothWindow::v_bump();
    let mut acc = exec::Compensated::default();
    let pw = (uhi - ulo) / panels as f64;
    for p in 0..panels {
        let a = ulo + p as f64 * pw;
        let mid = a + 0.5 * pw;
        let half = 0.5 * pw;
        for (node, weight) in GL_NODES.iter().zip(&GL_WEIGHTS) {
            let u = mid + half * node;
            let w = v.eval(u * u / y);
            if w != 0.0 {
                acc.add(weight * half * 2.0 * u * w * bessel_j(WEIGHT - 1, omega * u));
            }
        }
    }
    acc.value()
}
