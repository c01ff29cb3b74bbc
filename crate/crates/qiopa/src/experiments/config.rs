//! Experiment configuration: one structured record drives every run.

use crate::detection::DetectorChain;
use crate::error::{Error, Result};
use crate::fock::CutoffSpec;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Which measurement Bob applies per trial in the two-photon Bell test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BobMeasurement {
    /// The physical chain: loss, photomultipliers, orthogonality filter.
    #[default]
    OrthogonalityFilter,
    /// Idealized three-outcome projective discrimination onto the two
    /// amplified two-photon states (and "anything else" as inconclusive);
    /// the loss/threshold chain is bypassed. Reference pipeline for
    /// cross-checking against brute-force joint projections.
    IdealProjective,
}

/// Full description of a simulated run; serializable, versioned, and
/// overridable field-by-field from the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Config schema version; this crate reads version 1.
    pub schema_version: u32,
    /// Amplifier gain.
    pub g: f64,
    /// Fock-space truncation policy for dense-amplitude pipelines.
    pub cutoff: CutoffSpec,
    /// Trigger-side phases scanned in fringe experiments (radians,
    /// strictly increasing; a full 2π span supports the sinusoidal fit).
    pub phi_scan: Vec<f64>,
    /// Correlation bases measured by the entanglement test; subset of
    /// {1, 2, 3} (poles / circular / ±).
    pub analysis_bases: Vec<u8>,
    /// Bob-side detection chain and filter.
    pub chain: DetectorChain,
    /// Trigger-side detection efficiency; a pure Bernoulli thinning of
    /// recorded coincidences. It rescales attempt counts and rates but not
    /// the relative statistics of recorded events.
    pub alice_efficiency: f64,
    /// Conclusive events recorded per setting in sampling mode.
    pub n_trials: u64,
    /// Master seed; every sampled table derives its own counter-indexed
    /// stream from it, so results are independent of thread scheduling.
    pub rng_seed: u64,
    /// Four (φ_a, φ_b) analyzer settings, ordered (a,b), (a′,b), (a,b′),
    /// (a′,b′).
    pub chsh_settings: [(f64, f64); 4],
    /// Pulsed-pump repetition rate, used to convert probabilities to rates.
    pub repetition_rate_hz: f64,
    /// Bob's measurement in the Bell test.
    pub bob_measurement: BobMeasurement,
    /// Assumed first-basis visibility entering the separability sum
    /// (conservatively 0 when unmeasured).
    pub v1_assumed: f64,
    /// Skip sampling and report exact outcome probabilities only.
    pub exact: bool,
    /// Worker threads for sampling batches; 0 means "choose automatically".
    /// Results are byte-identical for every worker count.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema_version: 1,
            g: 4.40,
            cutoff: CutoffSpec::default(),
            phi_scan: (0..=12).map(|i| i as f64 * PI / 6.0).collect(),
            analysis_bases: vec![2, 3],
            chain: DetectorChain::default(),
            alice_efficiency: 0.10,
            n_trials: 500,
            rng_seed: 17,
            chsh_settings: [
                (FRAC_PI_4, 0.0),
                (-FRAC_PI_4, 0.0),
                (FRAC_PI_4, FRAC_PI_2),
                (-FRAC_PI_4, FRAC_PI_2),
            ],
            repetition_rate_hz: 250_000.0,
            bob_measurement: BobMeasurement::default(),
            v1_assumed: 0.0,
            exact: false,
            workers: 0,
        }
    }
}

impl ExperimentConfig {
    /// Check the whole record against its physical and structural domain.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != 1 {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (this build reads version 1)",
                self.schema_version
            )));
        }
        if !self.g.is_finite() || self.g < 0.0 {
            return Err(Error::InvalidGain { g: self.g });
        }
        if let CutoffSpec::Adaptive { eps_tail } = self.cutoff {
            if !eps_tail.is_finite() || eps_tail <= 0.0 || eps_tail >= 1.0 {
                return Err(Error::InvalidParameter {
                    name: "cutoff.eps_tail",
                    value: eps_tail,
                    constraint: "adaptive tail tolerance must lie in (0, 1)",
                });
            }
        }
        if self.phi_scan.is_empty() {
            return Err(Error::Config("phi_scan must not be empty".into()));
        }
        for pair in self.phi_scan.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::Config(
                    "phi_scan must be strictly increasing".into(),
                ));
            }
        }
        if self.phi_scan.iter().any(|p| !p.is_finite()) {
            return Err(Error::Config("phi_scan entries must be finite".into()));
        }
        if self.analysis_bases.is_empty()
            || self
                .analysis_bases
                .iter()
                .any(|b| !(1..=3).contains(b))
        {
            return Err(Error::Config(
                "analysis_bases must be a non-empty subset of {1, 2, 3}".into(),
            ));
        }
        let mut seen = [false; 4];
        for &b in &self.analysis_bases {
            if seen[b as usize] {
                return Err(Error::Config(
                    "analysis_bases must not repeat entries".into(),
                ));
            }
            seen[b as usize] = true;
        }
        self.chain.validate()?;
        if !self.alice_efficiency.is_finite()
            || self.alice_efficiency <= 0.0
            || self.alice_efficiency > 1.0
        {
            return Err(Error::InvalidParameter {
                name: "alice_efficiency",
                value: self.alice_efficiency,
                constraint: "trigger efficiency must lie in (0, 1]",
            });
        }
        if self.n_trials == 0 {
            return Err(Error::Config("n_trials must be positive".into()));
        }
        for (a, b) in &self.chsh_settings {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::Config("chsh_settings must be finite".into()));
            }
        }
        if !self.repetition_rate_hz.is_finite() || self.repetition_rate_hz <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "repetition_rate_hz",
                value: self.repetition_rate_hz,
                constraint: "repetition rate must be finite and > 0",
            });
        }
        if !self.v1_assumed.is_finite() || !(0.0..=1.0).contains(&self.v1_assumed) {
            return Err(Error::InvalidParameter {
                name: "v1_assumed",
                value: self.v1_assumed,
                constraint: "assumed visibility must lie in [0, 1]",
            });
        }
        Ok(())
    }

    /// Equatorial phase of an analysis basis index: 2 ↦ circular (3π/2),
    /// 3 ↦ ± (0). Basis 1 (poles) has no equatorial phase.
    pub fn basis_phase(basis_index: u8) -> Result<f64> {
        match basis_index {
            2 => Ok(3.0 * FRAC_PI_2),
            3 => Ok(0.0),
            _ => Err(Error::InvalidParameter {
                name: "basis_index",
                value: basis_index as f64,
                constraint: "fringe/correlation bases are 2 (circular) or 3 (±)",
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_paper_scaled() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.g, 4.40);
        assert_eq!(cfg.chain.eta, 0.03);
        assert_eq!(cfg.alice_efficiency, 0.10);
        assert_eq!(cfg.repetition_rate_hz, 250_000.0);
        assert_eq!(cfg.n_trials, 500);
        assert_eq!(cfg.phi_scan.len(), 13);
    }

    #[test]
    fn serde_roundtrip_preserves_the_config() {
        let cfg = ExperimentConfig::default();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn empty_object_deserializes_to_defaults() {
        let cfg: ExperimentConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<ExperimentConfig>(r#"{"gain": 2.0}"#);
        assert!(err.is_err());
        let msg = format!("{}", err.unwrap_err());
        assert!(msg.contains("gain"), "message should name the key: {msg}");
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.g = -1.0;
        assert!(cfg.validate().is_err());
        cfg = ExperimentConfig::default();
        cfg.phi_scan = vec![0.0, 0.5, 0.4];
        assert!(cfg.validate().is_err());
        cfg = ExperimentConfig::default();
        cfg.analysis_bases = vec![4];
        assert!(cfg.validate().is_err());
        cfg = ExperimentConfig::default();
        cfg.alice_efficiency = 0.0;
        assert!(cfg.validate().is_err());
    }
}
