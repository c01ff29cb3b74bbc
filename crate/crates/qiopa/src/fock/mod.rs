//! Truncated two-mode Fock-space engine.
//!
//! Everything in the simulator lives on two bosonic modes of a single spatial
//! beam: two orthogonal polarizations holding `m` and `n` photons. This module
//! provides the state container ([`TwoModeState`]), its photon-number view
//! ([`PhotonDistribution`]), polarization-basis changes ([`rotate::rotate_mode`]),
//! and the numerical amplifier evolution ([`squeeze::evolve_squeezer`]).
//!
//! # Mode convention
//!
//! The fixed reference basis is the pair of linear polarizations {H, V}
//! ("poles" of the polarization sphere). An *equatorial* basis is labelled by a
//! single phase φ and defined through the half-phase creation operators
//!
//! ```text
//! b_φ†  = 2^{-1/2} (e^{-iφ/2} a_H† + e^{+iφ/2} a_V†)
//! b_φ⊥† = 2^{-1/2} (−e^{-iφ/2} a_H† + e^{+iφ/2} a_V†)
//! ```
//!
//! Splitting the phase symmetrically between the two components (instead of
//! attaching e^{iφ} to the V term alone) buys an exact identity:
//! a_H† a_V† = ½ (b_φ†² − b_φ⊥†²) *independently of φ*, so the amplifier
//! unitary factorizes into the same pair of single-mode squeezers in every
//! equatorial basis and all two-party statistics depend only on phase
//! differences. The price is that basis labels are 4π-periodic at the operator
//! level; phases are normalized to [0, 2π) and the leftover sign is a global
//! phase, invisible to every probability computed here.

pub(crate) mod math;

mod distribution;
mod state;

pub mod rotate;
pub mod squeeze;

pub use distribution::PhotonDistribution;
pub use state::{Mode, TwoModeState};

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// A polarization mode basis: the {H, V} poles or an equatorial pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModeBasis {
    /// The fixed {H, V} reference basis.
    Poles,
    /// The equatorial basis of phase φ ∈ [0, 2π); see the module docs for the
    /// operator convention. φ = 0 is the ± basis; φ = 3π/2 is the R/L basis.
    Equatorial { phi: f64 },
}

impl ModeBasis {
    /// Equatorial basis with the phase normalized into [0, 2π).
    pub fn equatorial(phi: f64) -> Self {
        ModeBasis::Equatorial {
            phi: normalize_phase(phi),
        }
    }

    /// The ± basis (equatorial φ = 0).
    pub fn plus_minus() -> Self {
        ModeBasis::Equatorial { phi: 0.0 }
    }

    /// The R/L circular basis (equatorial φ = 3π/2).
    pub fn right_left() -> Self {
        ModeBasis::equatorial(3.0 * std::f64::consts::FRAC_PI_2)
    }

    /// The {H, V} poles.
    pub fn poles() -> Self {
        ModeBasis::Poles
    }

    /// Equatorial phase, if this is an equatorial basis.
    pub fn phase(&self) -> Option<f64> {
        match self {
            ModeBasis::Poles => None,
            ModeBasis::Equatorial { phi } => Some(*phi),
        }
    }
}

/// Normalize an angle into [0, 2π).
pub fn normalize_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can return TAU itself when phi is a tiny negative number.
    if r >= TAU {
        r - TAU
    } else {
        r
    }
}

/// How aggressively to truncate Fock space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CutoffSpec {
    /// Start from a gain-scaled guess and double the cutoff until the
    /// truncated tail mass drops below `eps_tail`.
    Adaptive { eps_tail: f64 },
    /// Use exactly this per-mode cutoff and report the honest tail deficit,
    /// whatever it is.
    Fixed { cutoff: usize },
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec::Adaptive { eps_tail: 1e-8 }
    }
}

impl CutoffSpec {
    /// Default adaptive tail tolerance.
    pub const DEFAULT_EPS_TAIL: f64 = 1e-8;

    /// Hard ceiling for adaptive growth of 1-D mode vectors.
    pub(crate) const MAX_MODE_CUTOFF: usize = 1 << 20;

    /// Hard ceiling for adaptive growth of dense two-mode grids; above this a
    /// (cutoff+1)² complex grid stops being desk-scale.
    pub(crate) const MAX_DENSE_CUTOFF: usize = 4096;

    /// Gain-scaled starting cutoff: ceil(8·sinh²g + 16). The amplified tails
    /// decay geometrically in tanh²g, so doubling from here converges fast.
    pub fn initial_cutoff(g: f64) -> usize {
        (8.0 * g.sinh().powi(2) + 16.0).ceil() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_normalize_into_2pi() {
        assert_eq!(normalize_phase(0.0), 0.0);
        assert!((normalize_phase(-std::f64::consts::FRAC_PI_4) - 7.0 * TAU / 8.0).abs() < 1e-15);
        assert_eq!(normalize_phase(TAU), 0.0);
        assert!(normalize_phase(-1e-18) < TAU);
    }

    #[test]
    fn named_bases_have_expected_phases() {
        assert_eq!(ModeBasis::plus_minus().phase(), Some(0.0));
        let r = ModeBasis::right_left().phase().unwrap();
        assert!((r - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(ModeBasis::poles().phase(), None);
    }

    #[test]
    fn initial_cutoff_tracks_gain() {
        assert_eq!(CutoffSpec::initial_cutoff(0.0), 16);
        let c = CutoffSpec::initial_cutoff(4.4);
        assert!((13280..=13282).contains(&c));
    }
}
