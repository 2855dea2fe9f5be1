//! Compactly supported C-infinity test windows.
//!
//! `V` is the bump exp(-1/((x-1)(2-x))) on (1,2), scaled to peak at 1.
//! `W` is a plateau: 1 on [2/3, 5/2], glued to 0 outside [1/2, 3] by
//! exponential smoothsteps. Both vanish with all derivatives at the support
//! boundary.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WindowKind {
    /// Bump supported on [1,2].
    VBump,
    /// Plateau supported on [1/2,3], identically 1 on [2/3,5/2].
    WPlateau,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SmoothWindow {
    pub kind: WindowKind,
    pub support: (f64, f64),
    pub plateau: Option<(f64, f64)>,
}

/// exp(-1/t) continued by 0 for t <= 0.
#[inline]
fn g(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth 0 -> 1 transition on [0,1].
#[inline]
fn smoothstep(t: f64) -> f64 {
    let a = g(t);
    let b = g(1.0 - t);
    a / (a + b)
}

impl SmoothWindow {
    pub fn v_bump() -> Self {
        SmoothWindow {
            kind: WindowKind::VBump,
            support: (1.0, 2.0),
            plateau: None,
        }
    }

    pub fn w_plateau() -> Self {
        SmoothWindow {
            kind: WindowKind::WPlateau,
            support: (0.5, 3.0),
            plateau: Some((2.0 / 3.0, 2.5)),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            WindowKind::VBump => {
                if x <= 1.0 || x >= 2.0 {
                    0.0
                } else {
                    // normalized so the peak at x = 3/2 is exactly 1
                    (4.0 - 1.0 / ((x - 1.0) * (2.0 - x))).exp()
                }
            }
            WindowKind::WPlateau => {
                if x <= 0.5 || x >= 3.0 {
                    0.0
                } else if x < 2.0 / 3.0 {
                    smoothstep((x - 0.5) / (2.0 / 3.0 - 0.5))
                } else if x <= 2.5 {
                    1.0
                } else {
                    smoothstep((3.0 - x) / 0.5)
                }
            }
        }
    }

    /// Numerical integral over the support; used for sanity scales.
    pub fn mass(&self) -> f64 {
        let (lo, hi) = self.support;
        let n = 20_000;
        let h = (hi - lo) / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let x = lo + (i as f64 + 0.5) * h;
            acc += self.eval(x);
        }
        acc * h
    }
}
