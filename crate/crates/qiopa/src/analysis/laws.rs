//! Closed-form laws: the two-photon conditional fringe and the thermal
//! threshold probability.

use crate::error::{Error, Result};
use crate::opa::GainParams;

/// The two-photon conditional fringe law *as reported*: with m̄ = sinh²g,
///
///   N₊(φ) = m̄ + (5m̄ + 2)·cos²(φ/2),   N₋(φ) = m̄ + (5m̄ + 2)·sin²(φ/2),
///   V_th  = (4m̄ + 1)/(6m̄ + 2).
///
/// Returns (N₊, N₋, V_th). These reported forms are mutually inconsistent
/// and disagree with the exact pipeline between the fringe extrema: the
/// formula's own φ = 0 value is 6m̄ + 2, while the stated extreme (and the
/// exact result) is 5m̄ + 2. They are kept verbatim as the documented
/// reference; [`two_photon_fringe_exact`] gives the law the conditional
/// states actually obey.
pub fn two_photon_fringe_law(phi: f64, gp: &GainParams) -> (f64, f64, f64) {
    let mbar = gp.mbar();
    let amplitude = 5.0 * mbar + 2.0;
    let half = 0.5 * phi;
    let n_plus = mbar + amplitude * half.cos().powi(2);
    let n_minus = mbar + amplitude * half.sin().powi(2);
    let v_th = (4.0 * mbar + 1.0) / (6.0 * mbar + 2.0);
    (n_plus, n_minus, v_th)
}

/// The exact two-photon conditional fringe: conditioning the two-pair singlet
/// on a trigger-side |2_{φ⊥}⟩ detection leaves Bob's aligned-mode mean photon
/// number at
///
///   N₊(φ) = m̄ + (4m̄ + 2)·cos²(φ/2),   N₋(φ) = m̄ + (4m̄ + 2)·sin²(φ/2),
///
/// an exactly sinusoidal fringe (the quadratic term in cos²(φ/2) cancels
/// identically), with visibility
///
///   V = (2m̄ + 1)/(3m̄ + 1),
///
/// falling from 1 at g = 0 (an unamplified pair interferes perfectly)
/// toward ⅔ as g → ∞. Returns (N₊, N₋, V).
pub fn two_photon_fringe_exact(phi: f64, gp: &GainParams) -> (f64, f64, f64) {
    let mbar = gp.mbar();
    let amplitude = 4.0 * mbar + 2.0;
    let half = 0.5 * phi;
    let n_plus = mbar + amplitude * half.cos().powi(2);
    let n_minus = mbar + amplitude * half.sin().powi(2);
    let v = (2.0 * mbar + 1.0) / (3.0 * mbar + 1.0);
    (n_plus, n_minus, v)
}

/// Probability that a thermal field of the given mean produces a signal at
/// or above k detected-photon equivalents:
/// Π(k) = (⟨n⟩/(1 + ⟨n⟩))^k, the exact tail sum of the geometric
/// photon-number distribution.
pub fn thermal_threshold_prob(mean_n: f64, k: u32) -> Result<f64> {
    if !mean_n.is_finite() || mean_n <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "mean_n",
            value: mean_n,
            constraint: "thermal mean must be finite and > 0",
        });
    }
    let q = mean_n / (1.0 + mean_n);
    Ok((k as f64 * q.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reported_law_has_the_documented_shape() {
        let gp = GainParams::new(1.0).unwrap();
        let mbar = gp.mbar();
        let (n0, n0m, v) = two_photon_fringe_law(0.0, &gp);
        assert!((n0 - (6.0 * mbar + 2.0)).abs() < 1e-12);
        assert!((n0m - mbar).abs() < 1e-12);
        let (npi, npim, _) = two_photon_fringe_law(PI, &gp);
        assert!((npi - mbar).abs() < 1e-12);
        assert!((npim - (6.0 * mbar + 2.0)).abs() < 1e-12);
        assert!((v - (4.0 * mbar + 1.0) / (6.0 * mbar + 2.0)).abs() < 1e-15);
    }

    #[test]
    fn reported_visibility_limits() {
        let (_, _, v0) = two_photon_fringe_law(0.0, &GainParams::new(0.0).unwrap());
        assert!((v0 - 0.5).abs() < 1e-15);
        let (_, _, vinf) = two_photon_fringe_law(0.0, &GainParams::new(12.0).unwrap());
        assert!((vinf - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn exact_law_endpoints_and_visibility() {
        let gp = GainParams::new(1.0).unwrap();
        let mbar = gp.mbar();
        let (n0, _, v) = two_photon_fringe_exact(0.0, &gp);
        assert!((n0 - (5.0 * mbar + 2.0)).abs() < 1e-12);
        let (npi, _, _) = two_photon_fringe_exact(PI, &gp);
        assert!((npi - mbar).abs() < 1e-12);
        // Fringe visibility of the exact law equals its closed form.
        let max = 5.0 * mbar + 2.0;
        let min = mbar;
        assert!((v - (max - min) / (max + min)).abs() < 1e-12);
        assert!((v - 0.731_476).abs() < 1e-6);
    }

    #[test]
    fn exact_visibility_limits() {
        // Unamplified (g = 0): the heralded pair interferes with full contrast.
        let (_, _, v0) = two_photon_fringe_exact(0.0, &GainParams::new(0.0).unwrap());
        assert!((v0 - 1.0).abs() < 1e-15);
        let (_, _, vinf) = two_photon_fringe_exact(0.0, &GainParams::new(12.0).unwrap());
        assert!((vinf - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn thermal_tail_closed_form() {
        assert_eq!(thermal_threshold_prob(1.0, 0).unwrap(), 1.0);
        assert!((thermal_threshold_prob(1.0, 1).unwrap() - 0.5).abs() < 1e-15);
        // Exact tail sum cross-check at ⟨n⟩ = 3.7, k = 12.
        let mean: f64 = 3.7;
        let q = mean / (1.0 + mean);
        let mut tail = 0.0;
        let mut p = (1.0 - q) * q.powi(12);
        for _ in 0..10_000 {
            tail += p;
            p *= q;
        }
        let closed = thermal_threshold_prob(mean, 12).unwrap();
        assert!((closed - tail).abs() < 1e-12, "{closed} vs {tail}");
    }

    #[test]
    fn thermal_tail_rejects_bad_means() {
        assert!(thermal_threshold_prob(0.0, 3).is_err());
        assert!(thermal_threshold_prob(-2.0, 3).is_err());
        assert!(thermal_threshold_prob(f64::NAN, 3).is_err());
    }
}
