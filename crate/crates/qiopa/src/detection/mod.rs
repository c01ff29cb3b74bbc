//! The measurement chain on the amplified beam: photon loss, photomultiplier
//! signals, and the orthogonality-filter decision.
//!
//! The chain is modeled in three stages:
//!
//! 1. **Loss** — every photon survives transmission and detection
//!    independently with probability η. On photon-*number* statistics this is
//!    exact binomial thinning, because the loss channel is diagonal-in /
//!    diagonal-out for number observables: the detected distribution depends
//!    only on the input distribution, never on number coherences
//!    ([`apply_loss`] and the purification oracle test enforce this).
//! 2. **Signals** — each of the two polarization analyzers feeds a
//!    photomultiplier whose pulse height is ξ per detected photon plus
//!    Gaussian jitter σ ([`pm_response`]).
//! 3. **Decision** — the orthogonality filter compares the signal difference
//!    against a threshold ξk: *plus* iff I₊ − I₋ > ξk, *minus* iff
//!    I₋ − I₊ > ξk, otherwise *inconclusive* ([`of_decide`]). Strict
//!    inequalities keep the two conclusive outcomes mutually exclusive and
//!    make boundary hits abstain. The triple of outcome probabilities for a
//!    given input distribution is computed exactly by [`of_probabilities`]:
//!    the Gaussian jitter is folded in analytically as error-function tails,
//!    so no sampling is involved.
//!
//! The filter realizes a three-outcome POVM: conclusive outcomes become rare
//! but highly discriminating as k grows, which is what lets a lossy
//! macroscopic measurement exhibit strong correlations at the cost of a small
//! conclusive fraction.
//!
//! Besides the physical threshold comparator, [`Discriminator::Parity`]
//! provides an idealized decision rule (parity of the first-mode count) that
//! perfectly distinguishes the two single-seeded macro-states at η = 1; it is
//! useful as a lossless-limit reference in tests and exact pipelines. Parity
//! is defined on photon numbers, not on analog signals, so [`of_decide`] —
//! which only sees signals — always applies the threshold rule.

mod filter;
mod loss;

pub use filter::{of_probabilities, OfProbabilities};
pub use loss::apply_loss;

pub(crate) use filter::gaussian_plus_weight;
pub(crate) use loss::{thermal_vector, thin_vector};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// How the orthogonality filter turns detected photon numbers into outcomes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discriminator {
    /// The physical rule: compare the signal difference against ξk.
    #[default]
    Threshold,
    /// Idealized rule: *plus* iff the first-mode detected count is odd.
    ///
    /// The two single-seeded macro-states have disjoint parity supports, so
    /// at η = 1 this discriminates them perfectly with no inconclusive
    /// outcomes. Signal jitter is ignored (parity is a number property).
    Parity,
}

/// Parameters of the lossy detection chain and orthogonality filter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorChain {
    /// Overall transmission × detection efficiency on the amplified beam.
    pub eta: f64,
    /// Photomultiplier scale: signal (mV) per detected photon.
    pub xi: f64,
    /// Gaussian signal jitter (mV) on each photomultiplier, folded into the
    /// decision analytically by [`of_probabilities`].
    pub sigma_noise: f64,
    /// Probability per recorded trial that the signals come from an
    /// uncorrelated stationary background instead of the state under test.
    pub background_rate: f64,
    /// Filter threshold in detected-photon-equivalent units; the comparator
    /// uses ξ·k on the signal difference.
    pub threshold_k: f64,
    /// Decision rule; the physical comparator unless overridden.
    pub discriminator: Discriminator,
}

impl Default for DetectorChain {
    fn default() -> Self {
        DetectorChain {
            eta: 0.03,
            xi: 1.0,
            sigma_noise: 0.0,
            background_rate: 0.0,
            threshold_k: 40.0,
            discriminator: Discriminator::Threshold,
        }
    }
}

impl DetectorChain {
    /// Check every field against its physical domain.
    pub fn validate(&self) -> Result<()> {
        if !self.eta.is_finite() || !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidEfficiency { eta: self.eta });
        }
        if !self.xi.is_finite() || self.xi <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "xi",
                value: self.xi,
                constraint: "signal scale must be finite and > 0",
            });
        }
        if !self.sigma_noise.is_finite() || self.sigma_noise < 0.0 {
            return Err(Error::InvalidParameter {
                name: "sigma_noise",
                value: self.sigma_noise,
                constraint: "signal jitter must be finite and ≥ 0",
            });
        }
        if !self.background_rate.is_finite() || !(0.0..=1.0).contains(&self.background_rate) {
            return Err(Error::InvalidParameter {
                name: "background_rate",
                value: self.background_rate,
                constraint: "background probability must lie in [0, 1]",
            });
        }
        if !self.threshold_k.is_finite() || self.threshold_k < 0.0 {
            return Err(Error::InvalidParameter {
                name: "threshold_k",
                value: self.threshold_k,
                constraint: "threshold must be finite and ≥ 0",
            });
        }
        Ok(())
    }

    /// Copy of this chain with a different threshold (handy in k-sweeps).
    pub fn with_threshold(&self, k: f64) -> Self {
        DetectorChain {
            threshold_k: k,
            ..*self
        }
    }

}

/// One orthogonality-filter decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OfOutcome {
    /// I₊ − I₋ exceeded the threshold.
    Plus,
    /// I₋ − I₊ exceeded the threshold.
    Minus,
    /// Neither difference cleared the threshold; the trial is discarded.
    Inconclusive,
}

/// Photomultiplier signal pair for detected counts (m, n): I± = ξ·count + jitter.
///
/// `m` and `n` are *detected* photon numbers — loss has already acted.
/// Deterministic when `sigma_noise` = 0 (the generator is not consumed).
pub fn pm_response<R: rand::Rng + ?Sized>(
    m: usize,
    n: usize,
    chain: &DetectorChain,
    rng: &mut R,
) -> (f64, f64) {
    let base_plus = chain.xi * m as f64;
    let base_minus = chain.xi * n as f64;
    if chain.sigma_noise == 0.0 {
        return (base_plus, base_minus);
    }
    let jitter = rand_distr::Normal::new(0.0, chain.sigma_noise)
        .expect("validated jitter width must be finite and ≥ 0");
    use rand::prelude::Distribution;
    (
        base_plus + jitter.sample(rng),
        base_minus + jitter.sample(rng),
    )
}

/// Threshold decision on a signal pair: strict comparisons against ξk.
///
/// Boundary hits (|I₊ − I₋| = ξk exactly) abstain, which keeps the two
/// conclusive conditions mutually exclusive for every k ≥ 0.
pub fn of_decide(i_plus: f64, i_minus: f64, chain: &DetectorChain) -> OfOutcome {
    let gate = chain.xi * chain.threshold_k;
    let diff = i_plus - i_minus;
    if diff > gate {
        OfOutcome::Plus
    } else if -diff > gate {
        OfOutcome::Minus
    } else {
        OfOutcome::Inconclusive
    }
}
