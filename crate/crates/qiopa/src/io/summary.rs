//! The JSON run summary: headline estimates with uncertainties.
//!
//! Every command writes one `RunSummary` document. Sections a command does
//! not produce are omitted from the JSON entirely, so consumers can treat
//! field presence as "this run measured that quantity".

use crate::error::Result;
use crate::experiments::{
    ChshRun, EntanglementResult, ExperimentConfig, FringeScan, OfCharacterization,
};
use serde::{Deserialize, Serialize};

/// A reported scalar with its one-standard-deviation uncertainty
/// (`sigma` = 0 for exact-probability results).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueWithSigma {
    pub value: f64,
    pub sigma: f64,
}

/// Visibility extracted in one correlation basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisVisibility {
    /// Correlation basis index (2 = circular, 3 = ±).
    pub basis_index: u8,
    pub visibility: ValueWithSigma,
}

/// One Bell-test setting's correlation function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettingCorrelation {
    /// Trigger-side analyzer phase (radians).
    pub phi_a: f64,
    /// Amplified-side analyzer phase (radians).
    pub phi_b: f64,
    pub e: ValueWithSigma,
}

/// One JSON document summarizing a run.
///
/// `conclusive_fraction` is the per-recorded-trial probability that the
/// filter does not abstain, averaged over the run's settings.
/// `estimated_attempts` and `estimated_duration_s` project the collected
/// statistics back to source shots: attempts ≈ events / (p_conclusive ·
/// trigger efficiency), duration = attempts / repetition rate. They are
/// reported only for sampled runs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunSummary {
    /// Which command produced this summary.
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visibilities: Option<Vec<BasisVisibility>>,
    /// First-basis visibility assumed (not measured) in the separability sum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v1_assumed: Option<f64>,
    /// Sum of visibilities entering the separability bound (> 1 violates).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_separability: Option<ValueWithSigma>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violates_separability: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_table: Option<Vec<SettingCorrelation>>,
    /// Bell sum E(a,b) + E(a′,b) + E(a,b′) − E(a′,b′) (|S| > 2 violates).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_chsh: Option<ValueWithSigma>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violates_chsh: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusive_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimated_attempts: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimated_duration_s: Option<f64>,
}

/// Attempts needed to record `events` conclusive coincidences when each
/// source shot passes the trigger with probability `alice_efficiency` and
/// the filter with probability `conclusive`.
fn attempts_for(events: u64, conclusive: f64, alice_efficiency: f64) -> Option<f64> {
    if conclusive > 0.0 {
        Some(events as f64 / (conclusive * alice_efficiency))
    } else {
        None
    }
}

impl RunSummary {
    /// Summary of one or more fringe scans: fitted visibilities per basis.
    pub fn for_fringe(cfg: &ExperimentConfig, scans: &[FringeScan]) -> Result<RunSummary> {
        let mut visibilities = Vec::with_capacity(scans.len());
        let mut conclusive_sum = 0.0;
        let mut n_points = 0usize;
        let mut attempts = 0.0;
        let mut sampled = false;
        for scan in scans {
            let fit = crate::analysis::visibility_fringe(scan)?;
            visibilities.push(BasisVisibility {
                basis_index: scan.basis_index,
                visibility: ValueWithSigma {
                    value: fit.v,
                    sigma: fit.sigma_v,
                },
            });
            for point in &scan.points {
                let conclusive = point.probs.conclusive();
                conclusive_sum += conclusive;
                n_points += 1;
                if point.counts.is_some() {
                    sampled = true;
                    attempts +=
                        attempts_for(cfg.n_trials, conclusive, cfg.alice_efficiency)
                            .unwrap_or(0.0);
                }
            }
        }
        let conclusive_fraction = conclusive_sum / n_points.max(1) as f64;
        Ok(RunSummary {
            command: "fringe".into(),
            visibilities: Some(visibilities),
            conclusive_fraction: Some(conclusive_fraction),
            estimated_attempts: sampled.then_some(attempts),
            estimated_duration_s: sampled.then_some(attempts / cfg.repetition_rate_hz),
            ..RunSummary::default()
        })
    }

    /// Summary of an entanglement (separability-bound) run.
    pub fn for_entanglement(cfg: &ExperimentConfig, res: &EntanglementResult) -> RunSummary {
        let visibilities = res
            .records
            .iter()
            .map(|r| BasisVisibility {
                basis_index: r.basis_index,
                visibility: ValueWithSigma {
                    value: r.visibility,
                    sigma: r.sigma_visibility,
                },
            })
            .collect();
        let (fraction, attempts, sampled) = fold_settings(
            cfg,
            res.records.iter().map(|r| (r.probs.conclusive(), r.counts.is_some())),
        );
        RunSummary {
            command: "entanglement".into(),
            visibilities: Some(visibilities),
            v1_assumed: Some(res.v1_assumed),
            s_separability: Some(ValueWithSigma {
                value: res.s,
                sigma: res.sigma_s,
            }),
            violates_separability: Some(res.violates_separability),
            conclusive_fraction: Some(fraction),
            estimated_attempts: sampled.then_some(attempts),
            estimated_duration_s: sampled.then_some(attempts / cfg.repetition_rate_hz),
            ..RunSummary::default()
        }
    }

    /// Summary of a Bell-test run: the correlation table and the Bell sum.
    pub fn for_chsh(cfg: &ExperimentConfig, run: &ChshRun) -> RunSummary {
        let e_table = run
            .records
            .iter()
            .map(|r| SettingCorrelation {
                phi_a: r.phi_a,
                phi_b: r.phi_b,
                e: ValueWithSigma {
                    value: r.e,
                    sigma: r.sigma_e,
                },
            })
            .collect();
        let (fraction, attempts, sampled) = fold_settings(
            cfg,
            run.records.iter().map(|r| (r.probs.conclusive(), r.counts.is_some())),
        );
        RunSummary {
            command: "chsh".into(),
            e_table: Some(e_table),
            s_chsh: Some(ValueWithSigma {
                value: run.s,
                sigma: run.sigma_s,
            }),
            violates_chsh: Some(run.violates_chsh),
            conclusive_fraction: Some(fraction),
            estimated_attempts: sampled.then_some(attempts),
            estimated_duration_s: sampled.then_some(attempts / cfg.repetition_rate_hz),
            ..RunSummary::default()
        }
    }

    /// Summary of a filter threshold sweep: the surviving fraction at the
    /// largest threshold, and how long the ensemble takes to collect.
    pub fn for_threshold(cfg: &ExperimentConfig, of: &OfCharacterization) -> RunSummary {
        let fraction = of
            .points
            .last()
            .map(|p| p.counts as f64 / of.n_trials as f64);
        RunSummary {
            command: "ofchar".into(),
            conclusive_fraction: fraction,
            estimated_attempts: Some(of.n_trials as f64),
            estimated_duration_s: Some(of.n_trials as f64 / cfg.repetition_rate_hz),
            ..RunSummary::default()
        }
    }
}

/// Average conclusive fraction, summed attempt estimate, and whether any
/// setting carried sampled counts.
fn fold_settings(
    cfg: &ExperimentConfig,
    settings: impl Iterator<Item = (f64, bool)>,
) -> (f64, f64, bool) {
    let mut sum = 0.0;
    let mut n = 0usize;
    let mut attempts = 0.0;
    let mut sampled = false;
    for (conclusive, has_counts) in settings {
        sum += conclusive;
        n += 1;
        if has_counts {
            sampled = true;
            attempts += attempts_for(cfg.n_trials, conclusive, cfg.alice_efficiency)
                .unwrap_or(0.0);
        }
    }
    (sum / n.max(1) as f64, attempts, sampled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run_chsh, run_entanglement_test, run_micro_macro_fringe};

    fn quick_cfg() -> ExperimentConfig {
        let mut cfg = ExperimentConfig {
            g: 0.8,
            n_trials: 300,
            exact: true,
            ..ExperimentConfig::default()
        };
        cfg.chain.eta = 1.0;
        cfg.chain.threshold_k = 0.0;
        cfg
    }

    #[test]
    fn fringe_summary_reports_visibility_and_omits_attempts_when_exact() {
        let cfg = quick_cfg();
        let scan = run_micro_macro_fringe(&cfg, 3).unwrap();
        let summary = RunSummary::for_fringe(&cfg, &[scan]).unwrap();
        let vis = &summary.visibilities.as_ref().unwrap()[0];
        assert_eq!(vis.basis_index, 3);
        assert!(vis.visibility.value > 0.5);
        assert!(summary.estimated_attempts.is_none());
        assert!(summary.conclusive_fraction.unwrap() > 0.0);
        // Omitted sections stay out of the JSON text entirely.
        let text = serde_json::to_string(&summary).unwrap();
        assert!(!text.contains("s_chsh"));
        assert!(!text.contains("estimated_attempts"));
    }

    #[test]
    fn sampled_fringe_summary_projects_attempts_and_duration() {
        let mut cfg = quick_cfg();
        cfg.exact = false;
        let scan = run_micro_macro_fringe(&cfg, 3).unwrap();
        let summary = RunSummary::for_fringe(&cfg, &[scan]).unwrap();
        let attempts = summary.estimated_attempts.unwrap();
        // 13 points × 300 events, conclusive ≲ 1, trigger efficiency 0.10.
        assert!(attempts >= 13.0 * 300.0 / 0.10 * 0.9, "attempts {attempts}");
        let duration = summary.estimated_duration_s.unwrap();
        assert!((duration - attempts / cfg.repetition_rate_hz).abs() < 1e-9);
    }

    #[test]
    fn entanglement_and_chsh_summaries_carry_their_headline_numbers() {
        let cfg = quick_cfg();
        let ent = run_entanglement_test(&cfg).unwrap();
        let summary = RunSummary::for_entanglement(&cfg, &ent);
        assert_eq!(summary.command, "entanglement");
        assert_eq!(summary.s_separability.unwrap().value, ent.s);
        assert_eq!(summary.v1_assumed.unwrap(), 0.0);
        assert_eq!(summary.visibilities.as_ref().unwrap().len(), 2);

        let bell = run_chsh(&cfg).unwrap();
        let summary = RunSummary::for_chsh(&cfg, &bell);
        assert_eq!(summary.e_table.as_ref().unwrap().len(), 4);
        assert_eq!(summary.s_chsh.unwrap().value, bell.s);
    }

    #[test]
    fn summary_json_roundtrips() {
        let cfg = quick_cfg();
        let ent = run_entanglement_test(&cfg).unwrap();
        let summary = RunSummary::for_entanglement(&cfg, &ent);
        let text = serde_json::to_string_pretty(&summary).unwrap();
        let back: RunSummary = serde_json::from_str(&text).unwrap();
        assert_eq!(summary, back);
    }
}
