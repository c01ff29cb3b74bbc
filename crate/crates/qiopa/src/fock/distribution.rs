use super::math::{kahan_total, KahanSum};
use super::ModeBasis;
use crate::error::{Error, Result};
use crate::fock::Mode;

/// A joint photon-number distribution P(m, n) on a truncated grid.
///
/// This is the classical object that survives once a state (or mixture) has
/// been reduced to number statistics in a fixed basis: loss channels, detector
/// responses and count predictions all act here. `deficit` carries the
/// probability mass beyond the grid.
#[derive(Clone, Debug)]
pub struct PhotonDistribution {
    basis: ModeBasis,
    cutoff: usize,
    probs: Vec<f64>,
    deficit: f64,
}

impl PhotonDistribution {
    /// Build from a row-major probability grid of dimension `(cutoff+1)²`.
    ///
    /// Probabilities must be finite and ≥ −1e-12 (tiny negatives from float
    /// cancellation are clamped to zero); Σp + deficit must be 1 within 1e-6.
    pub fn from_grid(
        basis: ModeBasis,
        cutoff: usize,
        probs: Vec<f64>,
        deficit: f64,
    ) -> Result<Self> {
        let dim = cutoff + 1;
        if probs.len() != dim * dim {
            return Err(Error::InvalidParameter {
                name: "probs.len()",
                value: probs.len() as f64,
                constraint: "must equal (cutoff+1)²",
            });
        }
        let mut clamped = probs;
        for p in &mut clamped {
            if !p.is_finite() || *p < -1e-12 {
                return Err(Error::InvalidProbabilities {
                    context: "photon-number grid entries must be finite and non-negative".into(),
                });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total = kahan_total(clamped.iter().copied()) + deficit;
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidProbabilities {
                context: "photon-number grid must sum to 1 (with deficit)".into(),
            });
        }
        Ok(Self {
            basis,
            cutoff,
            probs: clamped,
            deficit,
        })
    }

    /// Internal constructor for grids already known to be consistent
    /// (e.g. |amplitude|² of a validated state).
    pub(crate) fn from_parts(
        basis: ModeBasis,
        cutoff: usize,
        probs: Vec<f64>,
        deficit: f64,
    ) -> Self {
        debug_assert_eq!(probs.len(), (cutoff + 1) * (cutoff + 1));
        Self {
            basis,
            cutoff,
            probs,
            deficit,
        }
    }

    /// Basis in which the photon numbers are counted.
    pub fn basis(&self) -> ModeBasis {
        self.basis
    }

    /// Per-mode cutoff.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Probability mass beyond the grid.
    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    /// P(m, n); zero outside the grid.
    pub fn prob(&self, m: usize, n: usize) -> f64 {
        if m > self.cutoff || n > self.cutoff {
            0.0
        } else {
            self.probs[m * (self.cutoff + 1) + n]
        }
    }

    /// Row-major probability slice.
    pub fn grid(&self) -> &[f64] {
        &self.probs
    }

    /// Σ P(m, n) over the grid (1 − deficit for a consistent distribution).
    pub fn total(&self) -> f64 {
        kahan_total(self.probs.iter().copied())
    }

    /// Marginal distributions of the two modes, each of length `cutoff+1`.
    pub fn marginals(&self) -> (Vec<f64>, Vec<f64>) {
        let dim = self.cutoff + 1;
        let mut first = vec![0.0; dim];
        let mut second = vec![0.0; dim];
        for m in 0..dim {
            for n in 0..dim {
                let p = self.probs[m * dim + n];
                first[m] += p;
                second[n] += p;
            }
        }
        (first, second)
    }

    /// Mean photon number of one mode over the grid.
    ///
    /// Errors when the deficit exceeds 1e-6, as the missing tail biases the
    /// mean unboundedly.
    pub fn mean_photon(&self, mode: Mode) -> Result<f64> {
        const MEAN_DEFICIT_TOL: f64 = 1e-6;
        if self.deficit >= MEAN_DEFICIT_TOL {
            return Err(Error::UnderTruncated {
                deficit: self.deficit,
                tolerance: MEAN_DEFICIT_TOL,
                suggested_cutoff: self.cutoff * 2,
            });
        }
        let dim = self.cutoff + 1;
        let mut acc = KahanSum::new();
        for (idx, &p) in self.probs.iter().enumerate() {
            let occupation = match mode {
                Mode::First => idx / dim,
                Mode::Second => idx % dim,
            };
            acc.add(occupation as f64 * p);
        }
        Ok(acc.value())
    }

    /// Copy with a new cutoff; trimmed mass joins the deficit.
    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        let dim = cutoff + 1;
        let old_dim = self.cutoff + 1;
        let mut probs = vec![0.0; dim * dim];
        let mut trimmed = KahanSum::new();
        for (idx, &p) in self.probs.iter().enumerate() {
            let (m, n) = (idx / old_dim, idx % old_dim);
            if m <= cutoff && n <= cutoff {
                probs[m * dim + n] = p;
            } else {
                trimmed.add(p);
            }
        }
        Self {
            basis: self.basis,
            cutoff,
            probs,
            deficit: self.deficit + trimmed.value(),
        }
    }
}
