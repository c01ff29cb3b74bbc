//! Thermal characterization of the orthogonality filter threshold.
//!
//! The filter's comparator is driven with stationary thermal light and the
//! rate of signals at or above k detected-photon equivalents is recorded
//! while the threshold is swept. For a geometric photon-number distribution
//! of mean ⟨n⟩ the exceedance probability is (⟨n⟩/(1+⟨n⟩))^k exactly, so
//! the measured curve calibrates the threshold scale in physical units.

use crate::error::{Error, Result};
use crate::experiments::parallel::{map_indexed, stream_rng, BATCH_EVENTS};
use crate::experiments::ExperimentConfig;
use rand::prelude::Distribution;
use serde::{Deserialize, Serialize};

/// Random-stream range reserved for the characterization ensemble.
const OFCHAR_SETTING_ID: u64 = 32768;

/// One threshold point of the characterization sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OfCharPoint {
    /// Threshold in detected-photon equivalents.
    pub k: u32,
    /// Trials whose draw reached or exceeded k.
    pub counts: u64,
    /// Expected count n_trials · (⟨n⟩/(1+⟨n⟩))^k.
    pub expected: f64,
    /// Expected exceedance rate at the configured repetition rate.
    pub rate_hz: f64,
}

/// A threshold sweep over one shared thermal ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OfCharacterization {
    /// Mean detected photon number of the driving thermal field.
    pub mean_n: f64,
    /// Ensemble size.
    pub n_trials: u64,
    /// One point per threshold 0 ..= k_max.
    pub points: Vec<OfCharPoint>,
}

/// Drive the filter with thermal light of the given detected mean and sweep
/// the threshold from 0 to `k_max` over a single shared ensemble of
/// `cfg.n_trials` draws.
///
/// Sharing the ensemble mirrors the bench procedure (one attenuated source,
/// many comparator settings) and makes the sweep monotone by construction.
pub fn run_of_characterization(
    cfg: &ExperimentConfig,
    mean_n: f64,
    k_max: u32,
) -> Result<OfCharacterization> {
    cfg.validate()?;
    if !mean_n.is_finite() || mean_n <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "mean_n",
            value: mean_n,
            constraint: "thermal mean must be finite and > 0",
        });
    }
    if k_max > 1_000_000 {
        return Err(Error::InvalidParameter {
            name: "k_max",
            value: k_max as f64,
            constraint: "threshold sweep is limited to 10^6",
        });
    }
    let q = mean_n / (1.0 + mean_n);
    let geometric = rand_distr::Geometric::new(1.0 - q).expect("success probability in (0, 1]");
    let bins = k_max as usize + 2;
    let n_trials = cfg.n_trials;
    let n_batches = n_trials.div_ceil(BATCH_EVENTS) as usize;
    // Per-batch histograms with draws clamped into the last bin; merged in
    // batch order, so the result is worker-count independent.
    let partials = map_indexed(n_batches, cfg.workers, |b| {
        let mut rng = stream_rng(cfg.rng_seed, OFCHAR_SETTING_ID, b as u64);
        let remaining = n_trials - (b as u64) * BATCH_EVENTS;
        let size = remaining.min(BATCH_EVENTS);
        let mut hist = vec![0u64; bins];
        for _ in 0..size {
            let n = geometric.sample(&mut rng) as usize;
            hist[n.min(bins - 1)] += 1;
        }
        Ok(hist)
    })?;
    let mut hist = vec![0u64; bins];
    for part in partials {
        for (slot, c) in hist.iter_mut().zip(part) {
            *slot += c;
        }
    }
    // counts(k) = #{n ≥ k}: suffix sums of the histogram.
    let mut suffix = vec![0u64; bins + 1];
    for i in (0..bins).rev() {
        suffix[i] = suffix[i + 1] + hist[i];
    }
    let points = (0..=k_max)
        .map(|k| {
            let tail = q.powi(k as i32);
            OfCharPoint {
                k,
                counts: suffix[k as usize],
                expected: n_trials as f64 * tail,
                rate_hz: cfg.repetition_rate_hz * tail,
            }
        })
        .collect();
    Ok(OfCharacterization {
        mean_n,
        n_trials,
        points,
    })
}
