//! Exact exponential-sum kernels, Hecke coefficient streams, a flexible-moduli
//! circle-method toolkit and the exponent bookkeeping that ties them together.
//!
//! Everything here is desk-scale: complete sums are evaluated by exact
//! enumeration, step functions are integrated piecewise without quadrature
//! error, and every asymptotic inequality is turned into a measured ratio.
//! The crate is organized around the objects:
//!
//! * [`arith`] — squarefree factorization, CRT, modular inverses.
//! * [`expsums`] — Kloosterman sums, their CRT "baby" factors, mod-p Fourier
//!   transforms, correlation measurements and exponent-pair bounds.
//! * [`coeffs`] — Ramanujan tau, unitary GL(2) coefficients, the symmetric
//!   square lift and the ternary divisor proxy, with a binary disk cache.
//! * [`circle`] — overlapping-interval moduli covers, their exact variance,
//!   and the step-weighted correlation integral.
//! * [`spectral`] — resonance sums, FFT all-shift correlation, Parseval and
//!   average-cancellation measurements.
//! * [`voronoi`] — the holomorphic weight-12 dual summation identity and its
//!   Bessel transform decay.
//! * [`optimizer`] — exact rational min-max over monomial bounds.
//! * [`suite`] — the acceptance battery run by the CLI and the test suite.
//!
//! With the default `parallel` feature the sweep kernels fan out over a rayon
//! pool; reductions use fixed chunking so results do not depend on the worker
//! count. Disabling the feature gives a dependency-free sequential build.

pub mod arith;
pub mod circle;
pub mod coeffs;
pub mod error;
pub mod exec;
pub mod expsums;
pub mod fft;
pub mod optimizer;
pub mod report;
pub mod spectral;
pub mod suite;
pub mod voronoi;
pub mod windows;

pub use error::{Error, Result};
pub use report::SumReport;

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;
