//! Outcome probability tables, coincidence-count records, and the sampling
//! bridge between them.
//!
//! A *recorded trial* is a trigger-side detection together with a Bob-side
//! filter decision. Its outcome is one of nine categories: four conclusive
//! (α, β) cells fed by the state, the same four cells fed by the accidental
//! background, and "inconclusive" (the filter abstained). Sampling collects a
//! prescribed number of conclusive events — mirroring an experiment that
//! accumulates a fixed statistics per setting — so the conclusive cells are a
//! multinomial draw, and the number of interleaved inconclusive trials is
//! negative-binomial.

use crate::error::{Error, Result};
use rand::prelude::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// Exact per-recorded-trial outcome probabilities for one setting.
///
/// Cell order is (+,+), (+,−), (−,+), (−,−) with the trigger outcome first.
/// `p_state` and `p_background` split each conclusive cell by origin;
/// `p_inconclusive` completes the partition (including any tail-truncation
/// mass, which is treated conservatively as an abstention).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeProbabilities {
    /// Conclusive cells fed by the entangled state.
    pub p_state: [f64; 4],
    /// Conclusive cells fed by the accidental background.
    pub p_background: [f64; 4],
    /// Probability that the trial is discarded.
    pub p_inconclusive: f64,
}

impl OutcomeProbabilities {
    /// Build and validate: entries finite, ≥ −1e-12 (clamped), summing to 1
    /// within 1e-6.
    pub fn new(
        p_state: [f64; 4],
        p_background: [f64; 4],
        p_inconclusive: f64,
    ) -> Result<Self> {
        let mut table = OutcomeProbabilities {
            p_state,
            p_background,
            p_inconclusive,
        };
        let mut total = 0.0;
        for p in table
            .p_state
            .iter_mut()
            .chain(table.p_background.iter_mut())
            .chain(std::iter::once(&mut table.p_inconclusive))
        {
            if !p.is_finite() || *p < -1e-12 {
                return Err(Error::InvalidProbabilities {
                    context: "outcome probabilities must be finite and non-negative".into(),
                });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
            total += *p;
        }
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidProbabilities {
                context: format!("outcome probabilities sum to {total}, expected 1"),
            });
        }
        Ok(table)
    }

    /// Combined (state + background) probability of conclusive cell `i`.
    pub fn cell(&self, i: usize) -> f64 {
        self.p_state[i] + self.p_background[i]
    }

    /// Total conclusive probability per recorded trial.
    pub fn conclusive(&self) -> f64 {
        self.p_state.iter().sum::<f64>() + self.p_background.iter().sum::<f64>()
    }

    /// Correlation E = (p₊₊ + p₋₋ − p₊₋ − p₋₊) / conclusive of the exact
    /// table.
    pub fn correlation(&self) -> Result<f64> {
        let c = self.conclusive();
        if c <= 0.0 {
            return Err(Error::ZeroProbability {
                context: "no conclusive outcome probability".into(),
            });
        }
        Ok((self.cell(0) + self.cell(3) - self.cell(1) - self.cell(2)) / c)
    }
}

/// Coincidence counts recorded for one setting.
///
/// The four conclusive cells sum to `n_trials` (the statistics collected per
/// setting); `n_background` is the background-origin subset of those counts
/// and `n_inconclusive` the discarded trials interleaved with them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsTable {
    /// N(+,+).
    pub n_pp: u64,
    /// N(+,−).
    pub n_pm: u64,
    /// N(−,+).
    pub n_mp: u64,
    /// N(−,−).
    pub n_mm: u64,
    /// Discarded (filter-abstained) trials seen while collecting the table.
    pub n_inconclusive: u64,
    /// How many of the conclusive counts came from the background.
    pub n_background: u64,
    /// Conclusive events collected (= sum of the four cells).
    pub n_trials: u64,
}

impl CountsTable {
    /// The four conclusive cells in (+,+), (+,−), (−,+), (−,−) order.
    pub fn cells(&self) -> [u64; 4] {
        [self.n_pp, self.n_pm, self.n_mp, self.n_mm]
    }

    /// Sum of the conclusive cells.
    pub fn conclusive_total(&self) -> u64 {
        self.n_pp + self.n_pm + self.n_mp + self.n_mm
    }

    /// Cell-wise sum of two tables (merging batches is associative).
    pub fn merged(&self, other: &CountsTable) -> CountsTable {
        CountsTable {
            n_pp: self.n_pp + other.n_pp,
            n_pm: self.n_pm + other.n_pm,
            n_mp: self.n_mp + other.n_mp,
            n_mm: self.n_mm + other.n_mm,
            n_inconclusive: self.n_inconclusive + other.n_inconclusive,
            n_background: self.n_background + other.n_background,
            n_trials: self.n_trials + other.n_trials,
        }
    }
}

/// One scanned point of a fringe: trigger phase, exact probabilities, and —
/// in sampling mode — the recorded counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FringePoint {
    /// Trigger-side analyzer phase (radians, as scanned).
    pub phi: f64,
    /// Exact per-recorded-trial outcome probabilities at this phase.
    pub probs: OutcomeProbabilities,
    /// Sampled counts (absent in exact mode).
    pub counts: Option<CountsTable>,
}

/// A coincidence fringe: counts in the two Bob ports versus trigger phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FringeScan {
    /// Which correlation basis Bob's filter was fixed in (2 or 3).
    pub basis_index: u8,
    /// Scanned points with strictly increasing phase.
    pub points: Vec<FringePoint>,
}

impl FringeScan {
    /// Per-point (φ, plus, minus) series: counts when sampled, expected
    /// per-trial probabilities in exact mode.
    pub fn series(&self) -> Vec<(f64, f64, f64)> {
        self.points
            .iter()
            .map(|p| match &p.counts {
                Some(t) => (p.phi, t.n_pp as f64, t.n_pm as f64),
                None => (p.phi, p.probs.cell(0), p.probs.cell(1)),
            })
            .collect()
    }
}

/// Sample a counts table: a multinomial draw over the conclusive cells for
/// `n_trials` collected events, plus a negative-binomial count of the
/// inconclusive trials interleaved with them. Reproducible for a fixed seed
/// regardless of execution order.
pub fn sample_counts(
    probs: &OutcomeProbabilities,
    n_trials: u64,
    rng_seed: u64,
) -> Result<CountsTable> {
    let mut rng = ChaCha12Rng::seed_from_u64(rng_seed);
    sample_counts_with(probs, n_trials, &mut rng)
}

/// Same as [`sample_counts`] but drawing from a caller-owned stream; the
/// orchestration layer uses one counter-derived stream per (setting, batch).
pub(crate) fn sample_counts_with(
    probs: &OutcomeProbabilities,
    n_trials: u64,
    rng: &mut ChaCha12Rng,
) -> Result<CountsTable> {
    // Re-validate so hand-built tables get the same guarantees.
    let probs = OutcomeProbabilities::new(probs.p_state, probs.p_background, probs.p_inconclusive)?;
    let conclusive = probs.conclusive();
    if conclusive <= 0.0 {
        return Err(Error::ZeroProbability {
            context: "cannot collect conclusive events: conclusive probability is zero".into(),
        });
    }
    // Multinomial over the eight origin-resolved conclusive categories via
    // sequential binomial conditionals.
    let categories: [f64; 8] = [
        probs.p_state[0],
        probs.p_state[1],
        probs.p_state[2],
        probs.p_state[3],
        probs.p_background[0],
        probs.p_background[1],
        probs.p_background[2],
        probs.p_background[3],
    ];
    let mut drawn = [0u64; 8];
    let mut remaining = n_trials;
    let mut mass_left = conclusive;
    for (i, &p) in categories.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i == categories.len() - 1 || mass_left <= p {
            drawn[i] = remaining;
            break;
        }
        let conditional = (p / mass_left).clamp(0.0, 1.0);
        let n = rand_distr::Binomial::new(remaining, conditional)
            .expect("conditional probability is clamped into [0, 1]")
            .sample(rng);
        drawn[i] = n;
        remaining -= n;
        mass_left -= p;
    }
    // Inconclusive trials seen before the n_trials-th conclusive event:
    // negative binomial via its gamma–Poisson mixture.
    let p_inc = probs.p_inconclusive;
    let n_inconclusive = if p_inc <= 0.0 || n_trials == 0 {
        0
    } else {
        let ratio = p_inc / conclusive;
        let lambda = rand_distr::Gamma::new(n_trials as f64, ratio)
            .expect("shape and scale are positive")
            .sample(rng);
        if lambda <= 0.0 {
            0
        } else {
            rand_distr::Poisson::new(lambda)
                .expect("positive finite mean")
                .sample(rng) as u64
        }
    };
    Ok(CountsTable {
        n_pp: drawn[0] + drawn[4],
        n_pm: drawn[1] + drawn[5],
        n_mp: drawn[2] + drawn[6],
        n_mm: drawn[3] + drawn[7],
        n_inconclusive,
        n_background: drawn[4] + drawn[5] + drawn[6] + drawn[7],
        n_trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(cells: [f64; 4], inc: f64) -> OutcomeProbabilities {
        OutcomeProbabilities::new(cells, [0.0; 4], inc).unwrap()
    }

    #[test]
    fn certain_cell_gets_everything() {
        let t = sample_counts(&table([1.0, 0.0, 0.0, 0.0], 0.0), 500, 42).unwrap();
        assert_eq!(t.n_pp, 500);
        assert_eq!(t.n_inconclusive, 0);
        assert_eq!(t.n_background, 0);
        assert_eq!(t.conclusive_total(), t.n_trials);
    }

    #[test]
    fn uniform_cells_split_evenly_within_four_sigma() {
        let n = 100_000u64;
        let t = sample_counts(&table([0.25; 4], 0.0), n, 7).unwrap();
        let sigma = (n as f64 * 0.25 * 0.75).sqrt();
        for c in t.cells() {
            assert!(
                (c as f64 - n as f64 / 4.0).abs() < 4.0 * sigma,
                "cell {c} too far from {}",
                n / 4
            );
        }
        assert_eq!(t.conclusive_total(), n);
    }

    #[test]
    fn fixed_seed_reproduces_identical_tables() {
        let p = OutcomeProbabilities::new([0.2, 0.1, 0.05, 0.15], [0.03, 0.02, 0.0, 0.05], 0.4)
            .unwrap();
        let a = sample_counts(&p, 12_345, 99).unwrap();
        let b = sample_counts(&p, 12_345, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_counts(&p, 12_345, 100).unwrap();
        assert_ne!(a, c, "different seeds should differ somewhere");
    }

    #[test]
    fn inconclusive_count_tracks_the_odds_ratio() {
        // p_inc/p_conclusive = 9 → expect ≈ 9 inconclusive per conclusive.
        let p = table([0.05, 0.05, 0.0, 0.0], 0.9);
        let t = sample_counts(&p, 10_000, 3).unwrap();
        let ratio = t.n_inconclusive as f64 / 10_000.0;
        // NB mean 9, std ≈ √(r(1−p))/... ≈ 0.095 on the ratio; 5σ band.
        assert!((ratio - 9.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn background_split_is_recorded() {
        let p = OutcomeProbabilities::new([0.25, 0.25, 0.0, 0.0], [0.25, 0.25, 0.0, 0.0], 0.0)
            .unwrap();
        let t = sample_counts(&p, 40_000, 5).unwrap();
        let frac = t.n_background as f64 / 40_000.0;
        assert!((frac - 0.5).abs() < 0.02, "background fraction {frac}");
        assert_eq!(t.conclusive_total(), 40_000);
    }

    #[test]
    fn zero_conclusive_probability_is_an_error() {
        let p = OutcomeProbabilities::new([0.0; 4], [0.0; 4], 1.0).unwrap();
        assert!(sample_counts(&p, 10, 0).is_err());
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(OutcomeProbabilities::new([0.5, 0.2, 0.0, 0.0], [0.0; 4], 0.2).is_err());
        assert!(OutcomeProbabilities::new([f64::NAN, 0.0, 0.0, 0.0], [0.0; 4], 1.0).is_err());
        assert!(OutcomeProbabilities::new([-0.2, 0.4, 0.4, 0.4], [0.0; 4], 0.0).is_err());
    }
}
