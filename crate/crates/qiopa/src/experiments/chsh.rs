//! The two-photon Bell (CHSH) test on amplified spin-1 singlet
//! correlations.
//!
//! Both sources emit photon pairs; the trigger side analyzes its pair in
//! basis φ_a and the amplified side is filtered in basis φ_b. Trigger
//! outcomes map to dichotomic values as: both photons orthogonal → +1, both
//! aligned → −1, one in each mode → inconclusive. Bob's value is the filter
//! decision (or, in the ideal reference mode, a perfect discrimination of
//! the two stretched two-photon states). E is estimated per setting over
//! conclusive trials and S combines the four settings.

use crate::analysis::{chsh_s, correlation_e};
use crate::error::Result;
use crate::experiments::counts::{CountsTable, OutcomeProbabilities};
use crate::experiments::parallel::{map_indexed, sample_setting};
use crate::experiments::pipeline::{background_probs, ConditionalSource};
use crate::experiments::{BobMeasurement, ExperimentConfig};
use crate::opa::{AliceOutcome, JointKind};
use serde::{Deserialize, Serialize};

/// Random-stream identifier for one CHSH setting, derived from the analyzer
/// phases themselves rather than from the setting's position in the list, so
/// that reordering `chsh_settings` cannot change any record. The high bit
/// keeps these ids clear of the small structured ids used by the fringe and
/// entanglement scans (the sampler folds ids into the low bits of its stream
/// word).
fn setting_stream_id(phi_a: f64, phi_b: f64) -> u64 {
    fn mix(mut h: u64) -> u64 {
        h ^= h >> 30;
        h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 27;
        h = h.wrapping_mul(0x94d0_49bb_1331_11eb);
        h ^ (h >> 31)
    }
    let h = mix(phi_a.to_bits() ^ mix(phi_b.to_bits()));
    (1 << 43) | (h & ((1 << 43) - 1))
}

/// One CHSH setting: analyzer pair, exact table, optional counts, and the
/// correlation estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshSettingRecord {
    /// Trigger analyzer phase.
    pub phi_a: f64,
    /// Filter analysis phase.
    pub phi_b: f64,
    /// Exact per-trial outcome probabilities.
    pub probs: OutcomeProbabilities,
    /// Sampled counts (absent in exact mode).
    pub counts: Option<CountsTable>,
    /// Correlation E and its statistical uncertainty (0 in exact mode).
    pub e: f64,
    /// One standard deviation on E.
    pub sigma_e: f64,
}

/// Result of a four-setting CHSH run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshRun {
    /// Per-setting records in configuration order; the fourth setting enters
    /// S with a minus sign.
    pub records: Vec<ChshSettingRecord>,
    /// S = E₁ + E₂ + E₃ − E₄.
    pub s: f64,
    /// One standard deviation on S.
    pub sigma_s: f64,
    /// Whether |S| exceeds the local bound of 2.
    pub violates_chsh: bool,
}

/// Ideal-discrimination probabilities (plus, minus, inconclusive) for the
/// trigger outcome at analyzer offset δ: exact overlaps of the conditional
/// state with the two stretched amplified states, valid at any gain because
/// the amplified seeds stay mutually orthogonal.
fn ideal_projective(outcome: AliceOutcome, delta: f64) -> (f64, f64, f64) {
    let (c, s) = ((delta / 2.0).cos(), (delta / 2.0).sin());
    let (c4, s4) = (c.powi(4), s.powi(4));
    let cross = 2.0 * c.powi(2) * s.powi(2);
    match outcome {
        AliceOutcome::TwoOrthogonal => (c4, s4, cross),
        AliceOutcome::TwoAligned => (s4, c4, cross),
        // One photon in each trigger mode never yields a conclusive trial.
        _ => (0.0, 0.0, 1.0),
    }
}

/// Run the CHSH test over `cfg.chsh_settings`.
pub fn run_chsh(cfg: &ExperimentConfig) -> Result<ChshRun> {
    cfg.validate()?;
    let r = cfg.chain.background_rate;
    let background = background_probs(JointKind::Spin1, cfg)?;
    let records = map_indexed(cfg.chsh_settings.len(), cfg.workers, |i| {
        let (phi_a, phi_b) = cfg.chsh_settings[i];
        let (p_state, p_background) = match cfg.bob_measurement {
            BobMeasurement::OrthogonalityFilter => {
                let source = ConditionalSource::new(JointKind::Spin1, cfg, phi_b)?;
                let to = source.probs(AliceOutcome::TwoOrthogonal, phi_a, &cfg.chain)?;
                let ta = source.probs(AliceOutcome::TwoAligned, phi_a, &cfg.chain)?;
                let third = (1.0 - r) / 3.0;
                let state = [
                    third * to.p_plus,
                    third * to.p_minus,
                    third * ta.p_plus,
                    third * ta.p_minus,
                ];
                let bg = match &background {
                    Some(q) => {
                        let w = r / 3.0;
                        [w * q.p_plus, w * q.p_minus, w * q.p_plus, w * q.p_minus]
                    }
                    None => [0.0; 4],
                };
                (state, bg)
            }
            // The ideal reference discrimination bypasses the detection
            // chain entirely (no loss, threshold, jitter, or background).
            BobMeasurement::IdealProjective => {
                let delta = phi_a - phi_b;
                let (top, tom, _) = ideal_projective(AliceOutcome::TwoOrthogonal, delta);
                let (tap, tam, _) = ideal_projective(AliceOutcome::TwoAligned, delta);
                (
                    [top / 3.0, tom / 3.0, tap / 3.0, tam / 3.0],
                    [0.0; 4],
                )
            }
        };
        let conclusive: f64 =
            p_state.iter().sum::<f64>() + p_background.iter().sum::<f64>();
        let probs = OutcomeProbabilities::new(p_state, p_background, 1.0 - conclusive)?;
        let (counts, e, sigma_e) = if cfg.exact {
            (None, probs.correlation()?, 0.0)
        } else {
            let table = sample_setting(
                &probs,
                cfg.n_trials,
                cfg.rng_seed,
                setting_stream_id(phi_a, phi_b),
            )?;
            let (e, sigma) = correlation_e(&table)?;
            (Some(table), e, sigma)
        };
        Ok(ChshSettingRecord {
            phi_a,
            phi_b,
            probs,
            counts,
            e,
            sigma_e,
        })
    })?;
    let inputs: Vec<(f64, f64)> = records.iter().map(|r| (r.e, r.sigma_e)).collect();
    let combined = chsh_s(&[inputs[0], inputs[1], inputs[2], inputs[3]])?;
    Ok(ChshRun {
        records,
        s: combined.s,
        sigma_s: combined.sigma_s,
        violates_chsh: combined.s.abs() > 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::DetectorChain;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn base_config() -> ExperimentConfig {
        ExperimentConfig {
            g: 1.1,
            chain: DetectorChain {
                eta: 0.6,
                threshold_k: 0.0,
                ..DetectorChain::default()
            },
            exact: true,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn ideal_discrimination_matches_the_postselected_singlet_law() {
        // Conclusive-only postselection of the spin-1 singlet gives
        // E(δ) = cos δ / (1 − sin²δ / 2) under perfect discrimination.
        let mut cfg = base_config();
        cfg.bob_measurement = BobMeasurement::IdealProjective;
        let run = run_chsh(&cfg).unwrap();
        for rec in &run.records {
            let delta = rec.phi_a - rec.phi_b;
            let want = delta.cos() / (1.0 - 0.5 * delta.sin().powi(2));
            assert!(
                (rec.e - want).abs() < 1e-12,
                "E({delta}) = {} vs {want}",
                rec.e
            );
        }
        assert!(run.violates_chsh, "S = {}", run.s);
    }

    #[test]
    fn filter_correlations_have_the_singlet_sign_pattern() {
        let run = run_chsh(&base_config()).unwrap();
        let e: Vec<f64> = run.records.iter().map(|r| r.e).collect();
        // Settings (±π/4, 0), (π/4, π/2) correlate positively, the stretched
        // (−π/4, π/2) pair anticorrelates.
        assert!(e[0] > 0.0 && e[1] > 0.0 && e[2] > 0.0 && e[3] < 0.0, "{e:?}");
        assert!((run.s - (e[0] + e[1] + e[2] - e[3])).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_reproducible_across_worker_counts() {
        let mut cfg = base_config();
        cfg.exact = false;
        cfg.n_trials = 1500;
        cfg.workers = 1;
        let a = run_chsh(&cfg).unwrap();
        cfg.workers = 5;
        let b = run_chsh(&cfg).unwrap();
        assert_eq!(a, b);
        for rec in &a.records {
            assert_eq!(rec.counts.as_ref().unwrap().conclusive_total(), 1500);
        }
    }

    #[test]
    fn default_settings_are_the_canonical_chsh_geometry() {
        let cfg = ExperimentConfig::default();
        assert_eq!(
            cfg.chsh_settings,
            [
                (FRAC_PI_4, 0.0),
                (-FRAC_PI_4, 0.0),
                (FRAC_PI_4, FRAC_PI_2),
                (-FRAC_PI_4, FRAC_PI_2),
            ]
        );
    }
}
