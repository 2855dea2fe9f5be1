//! Exact circular step functions and the covering kernel built from them.
//!
//! The kernel I(x) = (1/(2 delta Phi)) sum over q, unit a of the indicator
//! of |a/q - x| <= delta is a finite sum of interval indicators, so it *is* a
//! step function; representing it exactly turns the variance inequality into
//! a computation with no quadrature error at all.

use super::moduli::ModuliSet;
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::exec;
use crate::report::SumReport;

/// Piecewise-constant function on the circle R/Z. Piece i occupies
/// [breakpoints[i], breakpoints[i+1]) with breakpoints[0] = 0; the last piece
/// wraps to 1 ≡ 0. Adjacent equal values are merged.
#[derive(Clone, Debug)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    /// Build from closed intervals [start, end) in [0, 1] (already split at
    /// the wrap point), each contributing `height`.
    pub fn from_intervals(intervals: &[(f64, f64)], height: f64) -> Self {
        // events: +1 at start, -1 at end; end = 1.0 simply never fires inside [0,1)
        let mut events: Vec<(f64, i64)> = Vec::with_capacity(2 * intervals.len() + 1);
        events.push((0.0, 0));
        for &(a, b) in intervals {
            debug_assert!((0.0..=1.0).contains(&a) && a <= b && b <= 1.0);
            events.push((a, 1));
            if b < 1.0 {
                events.push((b, -1));
            }
        }
        events.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());

        let mut breakpoints = Vec::new();
        let mut values = Vec::new();
        let mut count = 0i64;
        let mut idx = 0usize;
        while idx < events.len() {
            let pos = events[idx].0;
            while idx < events.len() && events[idx].0 == pos {
                count += events[idx].1;
                idx += 1;
            }
            let v = count as f64 * height;
            if let Some(last) = values.last() {
                if *last == v {
                    continue; // merge equal adjacent pieces
                }
            }
            breakpoints.push(pos);
            values.push(v);
        }
        StepFunction { breakpoints, values }
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.values.len()).map(move |i| {
            let lo = self.breakpoints[i];
            let hi = if i + 1 < self.breakpoints.len() {
                self.breakpoints[i + 1]
            } else {
                1.0
            };
            (lo, hi, self.values[i])
        })
    }

    /// O(log pieces) evaluation; x is reduced to [0,1).
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.rem_euclid(1.0);
        let i = match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&x).unwrap())
        {
            Ok(i) => i,
            Err(0) => self.values.len() - 1, // x < breakpoints[0] = 0 cannot happen; safe wrap
            Err(i) => i - 1,
        };
        self.values[i]
    }

    /// Exact integral over the circle.
    pub fn integral(&self) -> f64 {
        let mut acc = exec::Compensated::default();
        for (lo, hi, v) in self.pieces() {
            acc.add(v * (hi - lo));
        }
        acc.value()
    }

    /// Exact integral of (target - f)^2 over the circle.
    pub fn integral_sq_dev(&self, target: f64) -> f64 {
        let mut acc = exec::Compensated::default();
        for (lo, hi, v) in self.pieces() {
            let d = target - v;
            acc.add(d * d * (hi - lo));
        }
        acc.value()
    }
}

/// The covering kernel of a moduli set as an exact step function.
///
/// Intervals (a/q - delta, a/q + delta) that straddle an integer are split
/// into two circular pieces; a/q = 0 never occurs because gcd(a,q) = 1 with
/// 1 <= a <= q-1 (and q >= 2 in any nonempty set).
pub fn eval_i(ms: &ModuliSet) -> Result<StepFunction> {
    if ms.empty {
        return Err(Error::EmptyModuliSet);
    }
    let delta = ms.delta;
    let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(ms.phi_mass as usize + 8);
    for &q in &ms.moduli {
        for a in 1..q {
            if gcd(a, q) != 1 {
                continue;
            }
            let center = a as f64 / q as f64;
            let lo = center - delta;
            let hi = center + delta;
            if lo < 0.0 {
                intervals.push((lo + 1.0, 1.0));
                intervals.push((0.0, hi));
            } else if hi > 1.0 {
                intervals.push((lo, 1.0));
                intervals.push((0.0, hi - 1.0));
            } else {
                intervals.push((lo, hi));
            }
        }
    }
    let height = 1.0 / (2.0 * delta * ms.phi_mass as f64);
    Ok(StepFunction::from_intervals(&intervals, height))
}

/// The variance of the cover against the flat density: exact
/// integral of |1 - I|^2, normalized as (1/(delta Q^2)) integral, compared
/// with the square-root-cancellation target 1/(delta Phi)^2.
pub fn variance(ms: &ModuliSet) -> SumReport {
    let delta = ms.delta;
    let q2 = ms.q_scale * ms.q_scale;
    let (integral, lemma_lhs) = if ms.empty {
        (1.0, 1.0 / (delta * q2))
    } else {
        let step = eval_i(ms).expect("nonempty");
        let integral = step.integral_sq_dev(1.0);
        (integral, integral / (delta * q2))
    };
    let lemma_rhs = if ms.phi_mass > 0 {
        1.0 / (delta * ms.phi_mass as f64).powi(2)
    } else {
        0.0
    };
    let ratio_defined = lemma_rhs > 0.0;
    let mut report = SumReport::new("jutila-variance", lemma_lhs, lemma_rhs)
        .warn(!ratio_defined)
        .param("integral_sq_dev", integral)
        .param("q", ms.q_scale)
        .param("delta", delta)
        .param("phi", ms.phi_mass)
        .param("moduli_count", ms.moduli.len());
    if !ratio_defined {
        report.ratio = f64::NAN;
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{build_moduli_set, ModuliMode};

    #[test]
    fn single_interval_step() {
        // one modulus q=2, a=1, delta=0.1: indicator on (0.4, 0.6) scaled
        let ms = ModuliSet::custom(vec![2], 0.1).unwrap();
        let step = eval_i(&ms).unwrap();
        let height = 1.0 / (2.0 * 0.1 * 1.0);
        assert_eq!(step.eval(0.5), height);
        assert_eq!(step.eval(0.39), 0.0);
        assert_eq!(step.eval(0.61), 0.0);
        assert!((step.integral() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn full_cover_is_identically_one() {
        // q=2, a=1, delta=1/2: the interval (0,1) covers the circle
        let ms = ModuliSet::custom(vec![2], 0.5).unwrap();
        let step = eval_i(&ms).unwrap();
        for x in [0.01, 0.3, 0.77, 0.999] {
            assert!((step.eval(x) - 1.0).abs() < 1e-15, "x={x}");
        }
        assert!((step.integral() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn integral_is_one_for_real_sets() {
        for (q, mode) in [
            (40.0, ModuliMode::Restricted),
            (60.0, ModuliMode::AllSquarefree),
            (200.0, ModuliMode::AllSquarefree),
            (500.0, ModuliMode::AllSquarefree),
        ] {
            let ms = build_moduli_set(q, 1.0, mode, None).unwrap();
            if ms.empty {
                continue;
            }
            let step = eval_i(&ms).unwrap();
            assert!(
                (step.integral() - 1.0).abs() < 1e-12,
                "Q={q} err={}",
                (step.integral() - 1.0).abs()
            );
            // nonnegative everywhere
            for (_, _, v) in step.pieces() {
                assert!(v >= 0.0);
            }
        }
    }

    #[test]
    fn eval_matches_naive_indicator_sum() {
        let ms = build_moduli_set(30.0, 1.0, ModuliMode::AllSquarefree, Some(0.01)).unwrap();
        let step = eval_i(&ms).unwrap();
        let naive = |x: f64| -> f64 {
            let mut count = 0u64;
            for &q in &ms.moduli {
                for a in 1..q {
                    if gcd(a, q) != 1 {
                        continue;
                    }
                    let mut d = (a as f64 / q as f64 - x).abs();
                    d = d.min(1.0 - d);
                    if d <= ms.delta {
                        count += 1;
                    }
                }
            }
            count as f64 * (1.0 / (2.0 * ms.delta * ms.phi_mass as f64))
        };
        // avoid sampling exactly on breakpoints; interior points are exact
        let mut x = 0.000_137;
        while x < 1.0 {
            assert_eq!(step.eval(x), naive(x), "x={x}");
            x += 0.000_731;
        }
    }

    #[test]
    fn piece_count_near_two_phi() {
        let ms = build_moduli_set(60.0, 1.0, ModuliMode::AllSquarefree, Some(1e-3)).unwrap();
        let step = eval_i(&ms).unwrap();
        // disjoint intervals: 2 Phi breakpoints plus gap pieces, minus merges
        assert!(step.piece_count() as u64 <= 2 * ms.phi_mass + 2);
        assert!(step.piece_count() as u64 >= ms.phi_mass / 2);
    }

    #[test]
    fn variance_empty_set_reports_unit_integral() {
        let ms = ModuliSet::custom(vec![], 0.25).unwrap();
        let r = variance(&ms);
        assert!(r.warn);
        assert_eq!(r.params["integral_sq_dev"].as_f64().unwrap(), 1.0);
    }

    #[test]
    fn variance_ratio_small_on_dense_sets() {
        let ms = build_moduli_set(200.0, 1.0, ModuliMode::AllSquarefree, None).unwrap();
        let r = variance(&ms);
        assert!(!r.warn);
        assert!(r.ratio <= 100.0, "ratio {}", r.ratio);
    }

    #[test]
    fn variance_delta_doubling_stays_within_factor_four() {
        let base = build_moduli_set(200.0, 1.0, ModuliMode::AllSquarefree, Some(2e-3)).unwrap();
        let doubled = build_moduli_set(200.0, 1.0, ModuliMode::AllSquarefree, Some(4e-3)).unwrap();
        let a = variance(&base).ratio;
        let b = variance(&doubled).ratio;
        assert!(b <= 4.0 * a + 1e-9, "a={a} b={b}");
        assert!(a <= 4.0 * b + 1e-9, "a={a} b={b}");
    }
}
