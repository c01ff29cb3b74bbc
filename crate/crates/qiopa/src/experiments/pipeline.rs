//! Shared plumbing of the experiment runners: exact conditional filter
//! statistics through either the dense amplitude route (low gain) or the
//! separable detected-vector route (high gain), plus the background mixing
//! that turns them into per-trial outcome tables.

use crate::detection::{of_probabilities, DetectorChain, OfProbabilities};
use crate::error::{Error, Result};
use crate::experiments::separable::{background_mean, thermal_background_probs, SeparableEngine};
use crate::experiments::ExperimentConfig;
use crate::opa::{
    condition_on_alice, micro_macro_joint, spin1_joint, AliceOutcome, GainParams, JointKind,
    JointState,
};

/// Highest gain at which the dense amplitude grids stay desk-scale; above
/// this the runners switch to the separable detected-vector engine. Both
/// routes are exact — they agree to numerical precision where both apply.
pub(crate) const DENSE_GAIN_LIMIT: f64 = 2.0;

/// Largest truncated-tail mass tolerated before conditional statistics are
/// refused as biased: truncation leaks into the abstention column, so past
/// this point the reported fractions would silently drift.
pub(crate) const CONDITIONAL_DEFICIT_TOL: f64 = 1e-6;

/// One joint state prepared for conditional filter queries, routed through
/// whichever exact pipeline fits the gain.
pub(crate) enum ConditionalSource {
    Dense { joint: JointState, phi_b: f64 },
    Separable { engine: SeparableEngine, phi_b: f64 },
}

impl ConditionalSource {
    /// Prepare the source for the given joint kind at Bob's analysis phase
    /// `phi_b`, choosing the route from the configured gain.
    pub fn new(kind: JointKind, cfg: &ExperimentConfig, phi_b: f64) -> Result<Self> {
        let gp = GainParams::new(cfg.g)?;
        if cfg.g <= DENSE_GAIN_LIMIT {
            let joint = match kind {
                JointKind::MicroMacro => micro_macro_joint(phi_b, &gp, cfg.cutoff)?,
                JointKind::Spin1 => spin1_joint(phi_b, &gp, cfg.cutoff)?,
            };
            Ok(ConditionalSource::Dense { joint, phi_b })
        } else {
            let engine = SeparableEngine::new(kind, &gp, cfg.chain.eta, cfg.cutoff)?;
            Ok(ConditionalSource::Separable { engine, phi_b })
        }
    }

    /// Exact filter statistics of Bob's state conditioned on the trigger
    /// outcome, with the trigger analyzer at `phi_a`.
    pub fn probs(
        &self,
        outcome: AliceOutcome,
        phi_a: f64,
        chain: &DetectorChain,
    ) -> Result<OfProbabilities> {
        match self {
            ConditionalSource::Dense { joint, phi_b } => {
                let (_, bob) = condition_on_alice(joint, phi_a, outcome, *phi_b)?;
                if bob.tail_deficit() >= CONDITIONAL_DEFICIT_TOL {
                    return Err(Error::UnderTruncated {
                        deficit: bob.tail_deficit(),
                        tolerance: CONDITIONAL_DEFICIT_TOL,
                        suggested_cutoff: bob.cutoff() * 2,
                    });
                }
                of_probabilities(&bob.number_distribution(), chain)
            }
            ConditionalSource::Separable { engine, phi_b } => {
                engine.conditional_probs(outcome, phi_a - phi_b, chain)
            }
        }
    }
}

/// Filter statistics of the accidental background for this configuration:
/// thermal light on both filter modes, with the detected mean matched to the
/// joint's own amplified flux. `None` when the background rate is zero.
pub(crate) fn background_probs(
    kind: JointKind,
    cfg: &ExperimentConfig,
) -> Result<Option<OfProbabilities>> {
    if cfg.chain.background_rate == 0.0 {
        return Ok(None);
    }
    let gp = GainParams::new(cfg.g)?;
    let mean = background_mean(kind, &gp, cfg.chain.eta);
    Ok(Some(thermal_background_probs(mean, &cfg.chain)?))
}
