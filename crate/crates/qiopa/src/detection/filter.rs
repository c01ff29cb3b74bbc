//! Exact outcome probabilities of the orthogonality filter.

use super::loss::apply_loss;
use super::{DetectorChain, Discriminator};
use crate::error::Result;
use crate::fock::math::KahanSum;
use crate::fock::PhotonDistribution;

/// The three-way split of a filter measurement on a given input.
///
/// `p_plus + p_minus + p_inconclusive` equals the mass actually on the grid
/// (1 − deficit of the input distribution).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OfProbabilities {
    /// Probability of a conclusive *plus* outcome.
    pub p_plus: f64,
    /// Probability of a conclusive *minus* outcome.
    pub p_minus: f64,
    /// Probability that the filter abstains.
    pub p_inconclusive: f64,
}

impl OfProbabilities {
    /// Total conclusive probability (the filter transmission).
    pub fn conclusive(&self) -> f64 {
        self.p_plus + self.p_minus
    }

    /// Conditional visibility of the conclusive split:
    /// |p₊ − p₋| / (p₊ + p₋), or 0 when nothing is conclusive.
    pub fn conditional_contrast(&self) -> f64 {
        let c = self.conclusive();
        if c == 0.0 {
            0.0
        } else {
            (self.p_plus - self.p_minus).abs() / c
        }
    }
}

/// Gaussian-tail weight of the *plus* region for a detected count difference
/// δ = m′ − n′: P(ξδ + noise > ξk), noise variance 2σ² from two independent
/// photomultiplier jitters.
pub(crate) fn gaussian_plus_weight(delta: f64, chain: &DetectorChain) -> f64 {
    0.5 * libm::erfc(chain.xi * (chain.threshold_k - delta) / (2.0 * chain.sigma_noise))
}

/// Exact filter outcome probabilities for `d`, applying the chain's loss
/// internally, with signal jitter folded in analytically.
///
/// Deterministic: no sampling is performed. The three probabilities plus the
/// input deficit partition unity to ≲1e-9 (tiny thinning residues aside).
pub fn of_probabilities(d: &PhotonDistribution, chain: &DetectorChain) -> Result<OfProbabilities> {
    chain.validate()?;
    let detected = apply_loss(d, chain.eta)?;
    of_probabilities_detected(&detected, chain)
}

/// Same as [`of_probabilities`] but for a distribution already expressed in
/// *detected* photons (the loss stage is skipped).
pub(crate) fn of_probabilities_detected(
    detected: &PhotonDistribution,
    chain: &DetectorChain,
) -> Result<OfProbabilities> {
    let dim = detected.cutoff() + 1;
    let grid = detected.grid();
    let mut plus = KahanSum::new();
    let mut minus = KahanSum::new();
    let mut inconclusive = KahanSum::new();
    match chain.discriminator {
        Discriminator::Parity => {
            for m in 0..dim {
                let row: f64 = grid[m * dim..(m + 1) * dim].iter().sum();
                if m % 2 == 1 {
                    plus.add(row);
                } else {
                    minus.add(row);
                }
            }
        }
        Discriminator::Threshold if chain.sigma_noise == 0.0 => {
            let k = chain.threshold_k;
            for m in 0..dim {
                for n in 0..dim {
                    let p = grid[m * dim + n];
                    if p == 0.0 {
                        continue;
                    }
                    let delta = m as f64 - n as f64;
                    if delta > k {
                        plus.add(p);
                    } else if -delta > k {
                        minus.add(p);
                    } else {
                        inconclusive.add(p);
                    }
                }
            }
        }
        Discriminator::Threshold => {
            for m in 0..dim {
                for n in 0..dim {
                    let p = grid[m * dim + n];
                    if p == 0.0 {
                        continue;
                    }
                    let delta = m as f64 - n as f64;
                    let w_plus = gaussian_plus_weight(delta, chain);
                    let w_minus = gaussian_plus_weight(-delta, chain);
                    plus.add(p * w_plus);
                    minus.add(p * w_minus);
                    inconclusive.add(p * (1.0 - w_plus - w_minus));
                }
            }
        }
    }
    Ok(OfProbabilities {
        p_plus: plus.value(),
        p_minus: minus.value(),
        p_inconclusive: inconclusive.value(),
    })
}
