//! Moduli sets for the overlapping-interval cover: squarefree numbers in
//! (Q/2, Q], optionally restricted to prime factors ≡ 2 mod 3 below Q^eta.

use crate::arith::{euler_phi, squarefree_factor};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModuliMode {
    /// Squarefree q in (Q/2, Q] with every prime factor ≡ 2 mod 3 and <= Q^eta.
    Restricted,
    /// Every squarefree q in (Q/2, Q].
    AllSquarefree,
}

/// The moduli collection with its totient mass and interval half-width.
#[derive(Clone, Debug, Serialize)]
pub struct ModuliSet {
    pub q_scale: f64,
    pub eta: f64,
    pub mode: ModuliMode,
    pub moduli: Vec<u64>,
    pub phi_mass: u64,
    pub delta: f64,
    /// Set when the restriction emptied the collection; legitimate at small Q.
    pub empty: bool,
}

/// Build the moduli set at scale Q. `delta` defaults to Q^{-3/2} and must lie
/// in [Q^{-2}, Q^{-1}].
pub fn build_moduli_set(
    q_scale: f64,
    eta: f64,
    mode: ModuliMode,
    delta: Option<f64>,
) -> Result<ModuliSet> {
    if q_scale < 4.0 {
        return Err(Error::Range(format!("Q = {q_scale} < 4")));
    }
    let delta = delta.unwrap_or_else(|| q_scale.powf(-1.5));
    if delta < q_scale.powi(-2) * (1.0 - 1e-12) || delta > q_scale.powi(-1) * (1.0 + 1e-12) {
        return Err(Error::Range(format!(
            "delta = {delta} outside [Q^-2, Q^-1] = [{}, {}]",
            q_scale.powi(-2),
            q_scale.powi(-1)
        )));
    }
    let lo = (q_scale / 2.0).floor() as u64; // exclusive
    let hi = q_scale.floor() as u64; // inclusive
    let prime_cap = q_scale.powf(eta);
    let mut moduli = Vec::new();
    for q in lo + 1..=hi {
        let Ok(f) = squarefree_factor(q) else { continue };
        let ok = match mode {
            ModuliMode::AllSquarefree => true,
            ModuliMode::Restricted => f
                .primes()
                .iter()
                .all(|&p| p % 3 == 2 && (p as f64) <= prime_cap),
        };
        if ok {
            moduli.push(q);
        }
    }
    let phi_mass = moduli.iter().map(|&q| euler_phi(q)).sum();
    let empty = moduli.is_empty();
    Ok(ModuliSet {
        q_scale,
        eta,
        mode,
        moduli,
        phi_mass,
        delta,
        empty,
    })
}

impl ModuliSet {
    /// A hand-rolled set, for degenerate covers and tests. `delta` must lie
    /// in (0, 1/2].
    pub fn custom(moduli: Vec<u64>, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 0.5) {
            return Err(Error::Range(format!("delta = {delta} outside (0, 1/2]")));
        }
        for &q in &moduli {
            squarefree_factor(q)?;
        }
        let q_scale = moduli.iter().copied().max().unwrap_or(0) as f64;
        let phi_mass = moduli.iter().map(|&q| euler_phi(q)).sum();
        let empty = moduli.is_empty();
        Ok(ModuliSet {
            q_scale,
            eta: 0.0,
            mode: ModuliMode::AllSquarefree,
            moduli,
            phi_mass,
            delta,
            empty,
        })
    }

    /// Text export: header, then one modulus per line.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# Q={} eta={} delta={:e} phi={} mode={:?} count={}\n",
            self.q_scale,
            self.eta,
            self.delta,
            self.phi_mass,
            self.mode,
            self.moduli.len()
        );
        for q in &self.moduli {
            out.push_str(&format!("{q}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restricted_mode_example_at_40() {
        // squarefree q in (20, 40] with all prime factors ≡ 2 mod 3:
        // 22 = 2*11, 23, 29, 34 = 2*17
        let ms = build_moduli_set(40.0, 1.0, ModuliMode::Restricted, None).unwrap();
        assert_eq!(ms.moduli, vec![22, 23, 29, 34]);
        assert!(!ms.empty);
        assert_eq!(
            ms.phi_mass,
            euler_phi(22) + euler_phi(23) + euler_phi(29) + euler_phi(34)
        );
    }

    #[test]
    fn all_squarefree_mode_is_every_squarefree() {
        let ms = build_moduli_set(40.0, 0.5, ModuliMode::AllSquarefree, None).unwrap();
        for q in 21u64..=40 {
            let in_set = ms.moduli.contains(&q);
            assert_eq!(in_set, squarefree_factor(q).is_ok(), "q={q}");
        }
    }

    #[test]
    fn tiny_eta_empties_the_set_with_flag() {
        let ms = build_moduli_set(50.0, 0.05, ModuliMode::Restricted, None).unwrap();
        assert!(ms.empty);
        assert_eq!(ms.phi_mass, 0);
    }

    #[test]
    fn delta_validation() {
        assert!(build_moduli_set(100.0, 0.5, ModuliMode::AllSquarefree, Some(1e-4)).is_ok());
        assert!(build_moduli_set(100.0, 0.5, ModuliMode::AllSquarefree, Some(1e-5)).is_err());
        assert!(build_moduli_set(100.0, 0.5, ModuliMode::AllSquarefree, Some(0.5)).is_err());
        assert!(build_moduli_set(3.0, 0.5, ModuliMode::AllSquarefree, None).is_err());
    }

    #[test]
    fn phi_mass_scales_like_q_squared() {
        for q in [1000.0, 10_000.0] {
            let ms = build_moduli_set(q, 0.5, ModuliMode::AllSquarefree, None).unwrap();
            let ratio = ms.phi_mass as f64 / (q * q);
            assert!(ratio > 0.1 && ratio < 1.0, "Q={q} ratio={ratio}");
        }
    }

    #[test]
    fn text_export_roundtrips_by_eye() {
        let ms = build_moduli_set(40.0, 1.0, ModuliMode::Restricted, None).unwrap();
        let text = ms.to_text();
        assert!(text.starts_with("# Q=40"));
        assert_eq!(text.lines().count(), 1 + ms.moduli.len());
    }
}
