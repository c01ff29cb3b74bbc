//! Collective ("macro-spin") operators of the amplified qubit.
//!
//! For each of three mutually unbiased polarization bases, the operator
//! `Σ = |Φ⟩⟨Φ| − |Φ⊥⟩⟨Φ⊥|` distinguishes the two amplified images of that
//! basis's single-photon kets. Since the amplifier is unitary, these inherit
//! the qubit commutation algebra exactly: `[Σᵢ, Σⱼ] = 2iΣₖ` cyclically, even
//! though each Σ acts on the full multiphoton space.
//!
//! Operators are kept in rank-2 form (the two defining kets, stored in the
//! pole basis as a common reference) rather than as dense matrices: every
//! expectation value, application, or commutator test reduces to a handful of
//! inner products.

use num_complex::Complex64;

use super::gain::GainParams;
use super::macro_states::{macro_single, SingleSeed};
use crate::error::Result;
use crate::fock::squeeze::evolve_squeezer;
use crate::fock::{CutoffSpec, ModeBasis, TwoModeState};

/// The three operator axes: the pole basis and the two named equatorial
/// bases, ordered so the commutators close cyclically
/// (`[Σ₁,Σ₂] = 2iΣ₃` and cyclic permutations).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinAxis {
    /// Axis 1: the {H, V} pole basis.
    Poles,
    /// Axis 2: the circular R/L basis (equatorial φ = 3π/2).
    RightLeft,
    /// Axis 3: the ± basis (equatorial φ = 0).
    PlusMinus,
}

/// A rank-2 Hermitian operator `|plus⟩⟨plus| − |minus⟩⟨minus|` on the
/// truncated two-mode space, with both kets expressed in the pole basis.
#[derive(Clone, Debug)]
pub struct MacroSpinOperator {
    plus: TwoModeState,
    minus: TwoModeState,
}

impl MacroSpinOperator {
    /// The +1-eigenvalue ket (pole basis).
    pub fn plus_ket(&self) -> &TwoModeState {
        &self.plus
    }

    /// The −1-eigenvalue ket (pole basis).
    pub fn minus_ket(&self) -> &TwoModeState {
        &self.minus
    }

    /// ⟨ψ|Σ|ψ⟩ = |⟨plus|ψ⟩|² − |⟨minus|ψ⟩|². The state is re-expressed in
    /// the pole basis if needed.
    pub fn expectation(&self, state: &TwoModeState) -> Result<f64> {
        let state = if state.basis() == ModeBasis::Poles {
            state.clone()
        } else {
            state.rotated(ModeBasis::Poles)
        };
        let p = self.plus.inner_product(&state)?;
        let m = self.minus.inner_product(&state)?;
        Ok(p.norm_sqr() - m.norm_sqr())
    }

    /// Σ|ψ⟩ = |plus⟩⟨plus|ψ⟩ − |minus⟩⟨minus|ψ⟩ (generally unnormalized; the
    /// squared norm is the probability that ψ lies in the operator's rank-2
    /// support).
    pub fn apply(&self, state: &TwoModeState) -> Result<TwoModeState> {
        let state = if state.basis() == ModeBasis::Poles {
            state.clone()
        } else {
            state.rotated(ModeBasis::Poles)
        };
        let cp = self.plus.inner_product(&state)?;
        let cm = self.minus.inner_product(&state)?;
        let cutoff = self.plus.cutoff().max(self.minus.cutoff());
        let dim = cutoff + 1;
        let mut amps = vec![Complex64::ZERO; dim * dim];
        for (m, n, c) in self.plus.iter_nonzero() {
            amps[m * dim + n] += cp * c;
        }
        for (m, n, c) in self.minus.iter_nonzero() {
            amps[m * dim + n] -= cm * c;
        }
        Ok(TwoModeState::raw(ModeBasis::Poles, cutoff, amps, 0.0))
    }

    /// ⟨χ|Σ|ψ⟩.
    pub fn matrix_element(&self, bra: &TwoModeState, ket: &TwoModeState) -> Result<Complex64> {
        let bra = if bra.basis() == ModeBasis::Poles {
            bra.clone()
        } else {
            bra.rotated(ModeBasis::Poles)
        };
        let ket = if ket.basis() == ModeBasis::Poles {
            ket.clone()
        } else {
            ket.rotated(ModeBasis::Poles)
        };
        let p = bra.inner_product(&self.plus)? * self.plus.inner_product(&ket)?;
        let m = bra.inner_product(&self.minus)? * self.minus.inner_product(&ket)?;
        Ok(p - m)
    }
}

/// Build the macro-spin operator for one axis.
///
/// Equatorial axes use the closed-form amplified states rotated to the pole
/// basis. The pole axis has no closed form (the amplifier is not covariant
/// under full SU(2), only under equatorial rotations), so its kets are built
/// by evolving `|1_H⟩` and `|1_V⟩` numerically.
pub fn macro_spin_operator(
    axis: SpinAxis,
    gp: &GainParams,
    cutoff: CutoffSpec,
) -> Result<MacroSpinOperator> {
    let (plus, minus) = match axis {
        SpinAxis::Poles => {
            let h = TwoModeState::fock_ket(ModeBasis::Poles, 1, 1, 0);
            let v = TwoModeState::fock_ket(ModeBasis::Poles, 1, 0, 1);
            (
                evolve_squeezer(&h, gp.g(), cutoff)?,
                evolve_squeezer(&v, gp.g(), cutoff)?,
            )
        }
        SpinAxis::RightLeft | SpinAxis::PlusMinus => {
            let phi = match axis {
                SpinAxis::RightLeft => 3.0 * std::f64::consts::FRAC_PI_2,
                _ => 0.0,
            };
            (
                macro_single(SingleSeed::Aligned, phi, gp, cutoff)?.rotated(ModeBasis::Poles),
                macro_single(SingleSeed::Orthogonal, phi, gp, cutoff)?.rotated(ModeBasis::Poles),
            )
        }
    };
    Ok(MacroSpinOperator { plus, minus })
}
