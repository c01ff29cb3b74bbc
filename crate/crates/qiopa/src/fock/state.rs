use num_complex::Complex64;

use super::distribution::PhotonDistribution;
use super::math::{kahan_total, KahanSum};
use super::ModeBasis;
use crate::error::{Error, Result};

/// Which of the two polarization modes an operation refers to.
///
/// `First` is the mode whose occupation is the row index `m` (the basis-defining
/// polarization, e.g. π_φ in basis φ); `Second` is the orthogonal mode (π_φ⊥).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    First,
    Second,
}

/// A pure two-mode state on a truncated Fock grid, in a declared basis.
///
/// Amplitudes are stored row-major: `amp(m, n)` is the coefficient of the ket
/// with `m` photons in the first mode and `n` in the second, for
/// `m, n ∈ [0, cutoff]`. Validated constructors enforce
/// Σ|c|² + tail_deficit = 1 within 1e-9; a few internal operations (rank-2
/// operator application, pre-normalization projections) build raw vectors via
/// `raw` and document that their result is not normalized.
#[derive(Clone, Debug)]
pub struct TwoModeState {
    basis: ModeBasis,
    cutoff: usize,
    amps: Vec<Complex64>,
    tail_deficit: f64,
}

impl TwoModeState {
    /// The vacuum |0, 0⟩.
    pub fn vacuum(basis: ModeBasis, cutoff: usize) -> Self {
        Self::fock_ket(basis, cutoff, 0, 0)
    }

    /// The Fock ket |m, n⟩.
    ///
    /// # Panics
    /// If `m` or `n` exceeds `cutoff`.
    pub fn fock_ket(basis: ModeBasis, cutoff: usize, m: usize, n: usize) -> Self {
        assert!(
            m <= cutoff && n <= cutoff,
            "Fock ket ({m},{n}) outside cutoff {cutoff}"
        );
        let dim = cutoff + 1;
        let mut amps = vec![Complex64::ZERO; dim * dim];
        amps[m * dim + n] = Complex64::ONE;
        Self {
            basis,
            cutoff,
            amps,
            tail_deficit: 0.0,
        }
    }

    /// Build from an amplitude grid, checking normalization.
    ///
    /// `amps` is row-major with dimension `(cutoff+1)²`;
    /// Σ|c|² + `tail_deficit` must be 1 within 1e-9.
    pub fn from_amplitudes(
        basis: ModeBasis,
        cutoff: usize,
        amps: Vec<Complex64>,
        tail_deficit: f64,
    ) -> Result<Self> {
        let dim = cutoff + 1;
        if amps.len() != dim * dim {
            return Err(Error::InvalidParameter {
                name: "amps.len()",
                value: amps.len() as f64,
                constraint: "must equal (cutoff+1)²",
            });
        }
        let state = Self {
            basis,
            cutoff,
            amps,
            tail_deficit,
        };
        let total = state.norm_sqr() + tail_deficit;
        if !(total - 1.0).abs().is_finite() || (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm_sqr: total });
        }
        Ok(state)
    }

    /// Build from raw amplitudes without a normalization check.
    ///
    /// Used internally for operator images and intermediate projections whose
    /// norm is meaningful data rather than a constraint.
    pub(crate) fn raw(
        basis: ModeBasis,
        cutoff: usize,
        amps: Vec<Complex64>,
        tail_deficit: f64,
    ) -> Self {
        debug_assert_eq!(amps.len(), (cutoff + 1) * (cutoff + 1));
        Self {
            basis,
            cutoff,
            amps,
            tail_deficit,
        }
    }

    /// Coherent superposition α·a + β·b of two states in the same basis.
    ///
    /// The inputs are zero-padded to a common cutoff. The result keeps the
    /// weighted tail deficits; for states with disjoint support (the usual case
    /// here: opposite photon-number parities) it is exactly normalized.
    pub fn superpose(
        alpha: Complex64,
        a: &TwoModeState,
        beta: Complex64,
        b: &TwoModeState,
    ) -> Result<Self> {
        if a.basis != b.basis {
            return Err(Error::BasisMismatch {
                left: a.basis,
                right: b.basis,
            });
        }
        let cutoff = a.cutoff.max(b.cutoff);
        let dim = cutoff + 1;
        let mut amps = vec![Complex64::ZERO; dim * dim];
        for (m, n, c) in a.iter_nonzero() {
            amps[m * dim + n] += alpha * c;
        }
        for (m, n, c) in b.iter_nonzero() {
            amps[m * dim + n] += beta * c;
        }
        let deficit = alpha.norm_sqr() * a.tail_deficit + beta.norm_sqr() * b.tail_deficit;
        Self::from_amplitudes(a.basis, cutoff, amps, deficit)
    }

    /// Weighted sum Σ wᵢ·|ψᵢ⟩ of states in a common basis, validated to be
    /// normalized overall (the states need not be mutually orthogonal; the
    /// caller's weights must account for any overlaps).
    pub(crate) fn weighted_sum(terms: &[(Complex64, &TwoModeState)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or(Error::InvalidParameter {
                name: "terms.len()",
                value: 0.0,
                constraint: "weighted sum needs at least one term",
            })?
            .1;
        let mut cutoff = 0;
        for (_, s) in terms {
            if s.basis != first.basis {
                return Err(Error::BasisMismatch {
                    left: first.basis,
                    right: s.basis,
                });
            }
            cutoff = cutoff.max(s.cutoff);
        }
        let dim = cutoff + 1;
        let mut amps = vec![Complex64::ZERO; dim * dim];
        let mut deficit = 0.0;
        for (w, s) in terms {
            for (m, n, c) in s.iter_nonzero() {
                amps[m * dim + n] += w * c;
            }
            deficit += w.norm_sqr() * s.tail_deficit;
        }
        Self::from_amplitudes(first.basis, cutoff, amps, deficit)
    }

    /// Declared basis.
    pub fn basis(&self) -> ModeBasis {
        self.basis
    }

    /// Per-mode photon-number cutoff.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Probability mass lost to truncation.
    pub fn tail_deficit(&self) -> f64 {
        self.tail_deficit
    }

    /// Amplitude of |m, n⟩ (zero outside the grid).
    pub fn amp(&self, m: usize, n: usize) -> Complex64 {
        if m > self.cutoff || n > self.cutoff {
            Complex64::ZERO
        } else {
            self.amps[m * (self.cutoff + 1) + n]
        }
    }

    /// Row-major amplitude slice of length `(cutoff+1)²`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Iterator over nonzero amplitudes as `(m, n, c)`.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let dim = self.cutoff + 1;
        self.amps.iter().enumerate().filter_map(move |(idx, &c)| {
            if c == Complex64::ZERO {
                None
            } else {
                Some((idx / dim, idx % dim, c))
            }
        })
    }

    /// Σ|c|² over the grid (compensated summation).
    pub fn norm_sqr(&self) -> f64 {
        kahan_total(self.amps.iter().map(|c| c.norm_sqr()))
    }

    /// ⟨self|other⟩ with the smaller grid zero-padded.
    ///
    /// Errors if the states are declared in different bases: amplitudes in
    /// different bases are not comparable componentwise — rotate first.
    pub fn inner_product(&self, other: &TwoModeState) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                left: self.basis,
                right: other.basis,
            });
        }
        let dim = self.cutoff.min(other.cutoff) + 1;
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for m in 0..dim {
            for n in 0..dim {
                let term = self.amp(m, n).conj() * other.amp(m, n);
                re.add(term.re);
                im.add(term.im);
            }
        }
        Ok(Complex64::new(re.value(), im.value()))
    }

    /// |⟨self|other⟩|² with both sides renormalized over their grids.
    ///
    /// This compares state *directions*, which is the right notion when the two
    /// operands were truncated at different cutoffs.
    pub fn fidelity(&self, other: &TwoModeState) -> Result<f64> {
        let overlap = self.inner_product(other)?.norm_sqr();
        Ok(overlap / (self.norm_sqr() * other.norm_sqr()))
    }

    /// Photon-number probability grid P(m, n) = |c(m, n)|².
    pub fn number_distribution(&self) -> PhotonDistribution {
        PhotonDistribution::from_parts(
            self.basis,
            self.cutoff,
            self.amps.iter().map(|c| c.norm_sqr()).collect(),
            self.tail_deficit,
        )
    }

    /// Mean photon number in one mode.
    ///
    /// Errors if the state is under-truncated (tail deficit above 1e-6): a
    /// missing tail biases the mean by an unknown amount.
    pub fn mean_photon(&self, mode: Mode) -> Result<f64> {
        const MEAN_DEFICIT_TOL: f64 = 1e-6;
        if self.tail_deficit >= MEAN_DEFICIT_TOL {
            return Err(Error::UnderTruncated {
                deficit: self.tail_deficit,
                tolerance: MEAN_DEFICIT_TOL,
                suggested_cutoff: self.cutoff * 2,
            });
        }
        let dim = self.cutoff + 1;
        let mut acc = KahanSum::new();
        for (idx, c) in self.amps.iter().enumerate() {
            let occupation = match mode {
                Mode::First => idx / dim,
                Mode::Second => idx % dim,
            };
            acc.add(occupation as f64 * c.norm_sqr());
        }
        Ok(acc.value())
    }

    /// Largest total photon number with support above `1e-300` amplitude².
    pub fn max_total_photons(&self) -> usize {
        let dim = self.cutoff + 1;
        let mut max_total = 0;
        for (idx, c) in self.amps.iter().enumerate() {
            if c.norm_sqr() > 1e-300 {
                let total = idx / dim + idx % dim;
                max_total = max_total.max(total);
            }
        }
        max_total
    }

    /// Copy truncated (or zero-padded) to a new per-mode cutoff; trimmed
    /// probability mass is added to the tail deficit.
    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        let dim = cutoff + 1;
        let mut amps = vec![Complex64::ZERO; dim * dim];
        let mut trimmed = KahanSum::new();
        let old_dim = self.cutoff + 1;
        for (idx, &c) in self.amps.iter().enumerate() {
            let (m, n) = (idx / old_dim, idx % old_dim);
            if m <= cutoff && n <= cutoff {
                amps[m * dim + n] = c;
            } else {
                trimmed.add(c.norm_sqr());
            }
        }
        Self {
            basis: self.basis,
            cutoff,
            amps,
            tail_deficit: self.tail_deficit + trimmed.value(),
        }
    }

    /// Express this state in another basis (see [`super::rotate::rotate_mode`]).
    pub fn rotated(&self, target: ModeBasis) -> TwoModeState {
        super::rotate::rotate_mode(self, target)
    }
}
