//! Fourier-coefficient streams: exact Ramanujan tau, the unitary GL(2)
//! stream, the symmetric-square lift and the ternary divisor proxy.
//!
//! Streams are immutable once built and are cached both in memory and in a
//! small binary column file keyed by (kind, length).

pub mod cache;
mod streams;
mod tau;

pub use streams::{
    lambda1_full, lambda_gl2, second_moment_check, sym2_lift, tau3, CoefficientStream, StreamKind,
};
pub use tau::{ramanujan_tau, ramanujan_tau_cached, tau3_sieve};

/// Desk-scale cap on stream length.
pub const MAX_STREAM_LEN: usize = 1_000_000;
