//! The matched-basis entanglement test of the micro–macro singlet.
//!
//! Correlation visibilities are measured with both analyzers in the same
//! basis. For any separable micro–macro state the three mutually unbiased
//! visibilities obey V₁ + V₂ + V₃ ≤ 1; the runner measures the two
//! equatorial ones and combines them with an assumed pole-basis value
//! (that channel needs no amplifier phase reference and is taken as given).

use crate::analysis::correlation_e;
use crate::error::Result;
use crate::experiments::counts::{CountsTable, OutcomeProbabilities};
use crate::experiments::fringe::SETTING_STRIDE;
use crate::experiments::parallel::{map_indexed, sample_setting};
use crate::experiments::pipeline::{background_probs, ConditionalSource};
use crate::experiments::ExperimentConfig;
use crate::opa::{AliceOutcome, JointKind};
use serde::{Deserialize, Serialize};

/// Offset distinguishing matched-basis settings from fringe points inside a
/// basis's stream range.
const MATCHED_SETTING_OFFSET: u64 = 4000;

/// One matched-basis setting: exact table, optional counts, and the
/// visibility extracted from whichever of the two is authoritative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettingRecord {
    /// Correlation basis (2 or 3).
    pub basis_index: u8,
    /// Exact per-trial outcome probabilities.
    pub probs: OutcomeProbabilities,
    /// Sampled counts (absent in exact mode).
    pub counts: Option<CountsTable>,
    /// Visibility V = |E| and its statistical uncertainty (0 in exact mode).
    pub visibility: f64,
    /// One standard deviation on the visibility.
    pub sigma_visibility: f64,
}

/// Result of the entanglement test: per-basis records and the separability
/// sum S = V₁(assumed) + V₂ + V₃.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementResult {
    /// One record per configured analysis basis, in configuration order.
    pub records: Vec<SettingRecord>,
    /// The assumed pole-basis visibility entering the sum.
    pub v1_assumed: f64,
    /// Separability sum S = v₁ + Σ measured visibilities.
    pub s: f64,
    /// One standard deviation on S (quadrature over the measured terms).
    pub sigma_s: f64,
    /// Whether S exceeds the separable bound of 1.
    pub violates_separability: bool,
}

/// Run the matched-basis entanglement test over `cfg.analysis_bases`.
///
/// In each basis both trigger ports are recorded: the aligned port heralds
/// the orthogonal macro qubit and vice versa, so a singlet shows perfect
/// anticorrelation and V = |E| per basis.
pub fn run_entanglement_test(cfg: &ExperimentConfig) -> Result<EntanglementResult> {
    cfg.validate()?;
    let background = background_probs(JointKind::MicroMacro, cfg)?;
    let r = cfg.chain.background_rate;
    let records = map_indexed(cfg.analysis_bases.len(), cfg.workers, |i| {
        let basis_index = cfg.analysis_bases[i];
        let phi_b = ExperimentConfig::basis_phase(basis_index)?;
        let source = ConditionalSource::new(JointKind::MicroMacro, cfg, phi_b)?;
        // Matched bases: the trigger analyzer sits at φ_b too.
        let aligned = source.probs(AliceOutcome::SingleAligned, phi_b, &cfg.chain)?;
        let orthogonal = source.probs(AliceOutcome::SingleOrthogonal, phi_b, &cfg.chain)?;
        let p_state = [
            (1.0 - r) * 0.5 * aligned.p_plus,
            (1.0 - r) * 0.5 * aligned.p_minus,
            (1.0 - r) * 0.5 * orthogonal.p_plus,
            (1.0 - r) * 0.5 * orthogonal.p_minus,
        ];
        let p_background = match &background {
            Some(q) => [
                r * 0.5 * q.p_plus,
                r * 0.5 * q.p_minus,
                r * 0.5 * q.p_plus,
                r * 0.5 * q.p_minus,
            ],
            None => [0.0; 4],
        };
        let conclusive: f64 =
            p_state.iter().sum::<f64>() + p_background.iter().sum::<f64>();
        let probs = OutcomeProbabilities::new(p_state, p_background, 1.0 - conclusive)?;
        let (counts, visibility, sigma_visibility) = if cfg.exact {
            (None, probs.correlation()?.abs(), 0.0)
        } else {
            let setting_id = basis_index as u64 * SETTING_STRIDE + MATCHED_SETTING_OFFSET;
            let table = sample_setting(&probs, cfg.n_trials, cfg.rng_seed, setting_id)?;
            let (e, sigma_e) = correlation_e(&table)?;
            (Some(table), e.abs(), sigma_e)
        };
        Ok(SettingRecord {
            basis_index,
            probs,
            counts,
            visibility,
            sigma_visibility,
        })
    })?;
    let s = cfg.v1_assumed + records.iter().map(|r| r.visibility).sum::<f64>();
    let sigma_s = records
        .iter()
        .map(|r| r.sigma_visibility * r.sigma_visibility)
        .sum::<f64>()
        .sqrt();
    Ok(EntanglementResult {
        records,
        v1_assumed: cfg.v1_assumed,
        s,
        sigma_s,
        violates_separability: s > 1.0,
    })
}
