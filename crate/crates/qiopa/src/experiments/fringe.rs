//! The micro–macroscopic coincidence fringe.
//!
//! Bob's filter sits in one fixed correlation basis while the trigger
//! analyzer phase is scanned. Each recorded trial is a trigger click in the
//! aligned port together with a conclusive filter decision; the two
//! conclusive counts trace complementary fringes whose visibility is the
//! headline observable of the amplified-singlet correlations.

use crate::error::Result;
use crate::experiments::counts::{FringePoint, FringeScan, OutcomeProbabilities};
use crate::experiments::parallel::{map_indexed, sample_setting};
use crate::experiments::pipeline::{background_probs, ConditionalSource};
use crate::experiments::ExperimentConfig;
use crate::opa::{AliceOutcome, JointKind};

/// Stride separating the random-stream ranges of different fringe points
/// (and other setting families); ample room for any scan length.
pub(crate) const SETTING_STRIDE: u64 = 4096;

/// Run a fringe scan in the given correlation basis (2 or 3).
///
/// For each scanned trigger phase the runner computes the exact per-trial
/// outcome table — state and background contributions separately — and, in
/// sampling mode, draws the recorded counts from counter-derived streams.
/// The trigger outcome is fixed to the aligned port, so only the (+, ·)
/// cells are populated.
pub fn run_micro_macro_fringe(cfg: &ExperimentConfig, basis_index: u8) -> Result<FringeScan> {
    cfg.validate()?;
    let phi_b = ExperimentConfig::basis_phase(basis_index)?;
    let source = ConditionalSource::new(JointKind::MicroMacro, cfg, phi_b)?;
    let background = background_probs(JointKind::MicroMacro, cfg)?;
    let r = cfg.chain.background_rate;
    let points = map_indexed(cfg.phi_scan.len(), cfg.workers, |i| {
        let phi_a = cfg.phi_scan[i];
        let of = source.probs(AliceOutcome::SingleAligned, phi_a, &cfg.chain)?;
        let p_state = [(1.0 - r) * of.p_plus, (1.0 - r) * of.p_minus, 0.0, 0.0];
        let p_background = match &background {
            Some(q) => [r * q.p_plus, r * q.p_minus, 0.0, 0.0],
            None => [0.0; 4],
        };
        let conclusive: f64 =
            p_state.iter().sum::<f64>() + p_background.iter().sum::<f64>();
        let probs = OutcomeProbabilities::new(p_state, p_background, 1.0 - conclusive)?;
        let counts = if cfg.exact {
            None
        } else {
            let setting_id = basis_index as u64 * SETTING_STRIDE + i as u64;
            Some(sample_setting(&probs, cfg.n_trials, cfg.rng_seed, setting_id)?)
        };
        Ok(FringePoint {
            phi: phi_a,
            probs,
            counts,
        })
    })?;
    Ok(FringeScan {
        basis_index,
        points,
    })
}
