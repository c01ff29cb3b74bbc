//! The entangled micro–macro joint states and Alice-side conditioning.
//!
//! Both joints are singlets, so they keep the same branch structure in every
//! equatorial basis (verified by the rotation oracles in the integration
//! tests). Conditioning on an Alice outcome in basis φ_a therefore never
//! needs an explicit joint-state rotation: the joint is rebuilt at φ_a, the
//! matching branch selected, and Bob's state re-expressed at φ_b through the
//! closed-form one- and two-photon basis changes pushed through the
//! amplifier's linearity.

use num_complex::Complex64;

use super::gain::GainParams;
use super::macro_states::{macro_single, macro_two_photon_in, SingleSeed, TwoPhotonKind};
use crate::error::{Error, Result};
use crate::fock::{CutoffSpec, TwoModeState};

/// An Alice-side measurement outcome, which doubles as the branch label of a
/// joint state. Single-photon labels belong to the micro–macro joint,
/// two-photon labels to the spin-1 joint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AliceOutcome {
    /// `|1φ_a⟩` — one photon in the analysis mode.
    SingleAligned,
    /// `|1φ_a⊥⟩` — one photon in the orthogonal mode.
    SingleOrthogonal,
    /// `|2φ_a⟩` — both photons in the analysis mode.
    TwoAligned,
    /// `|1φ_a; 1φ_a⊥⟩` — one photon in each mode.
    OneEach,
    /// `|2φ_a⊥⟩` — both photons in the orthogonal mode.
    TwoOrthogonal,
}

impl AliceOutcome {
    fn is_single_photon(self) -> bool {
        matches!(self, AliceOutcome::SingleAligned | AliceOutcome::SingleOrthogonal)
    }
}

/// Which entangled joint a [`JointState`] represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JointKind {
    /// One photon at Alice entangled with an amplified qubit at Bob.
    MicroMacro,
    /// Two photons at Alice entangled with amplified two-photon states at
    /// Bob: a singlet of two three-level systems.
    Spin1,
}

/// One branch of a joint state: Alice's ket, its weight, and Bob's correlated
/// (normalized) state.
#[derive(Clone, Debug)]
pub struct Branch {
    pub alice: AliceOutcome,
    pub weight: Complex64,
    pub bob: TwoModeState,
}

/// A bipartite entangled state in Schmidt-like form over orthogonal Alice
/// kets, built at a declared equatorial basis phase.
#[derive(Clone, Debug)]
pub struct JointState {
    branches: Vec<Branch>,
    phi: f64,
    gain: GainParams,
    cutoff: CutoffSpec,
}

impl JointState {
    /// The branches, in their defining order.
    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// The equatorial phase the joint was built at.
    pub fn phase(&self) -> f64 {
        self.phi
    }

    /// Gain parameters used for Bob's amplified states.
    pub fn gain(&self) -> &GainParams {
        &self.gain
    }

    /// Truncation policy used for Bob's amplified states.
    pub fn cutoff(&self) -> CutoffSpec {
        self.cutoff
    }

    /// Micro–macro or spin-1.
    pub fn kind(&self) -> JointKind {
        if self.branches.len() == 2 {
            JointKind::MicroMacro
        } else {
            JointKind::Spin1
        }
    }
}

/// The amplified singlet: one photon stays with Alice while its partner is
/// amplified into Bob's macro-state,
/// `2^{-1/2}(|1φ⊥⟩_A |Φ^φ⟩_B − |1φ⟩_A |Φ^{φ⊥}⟩_B)`.
pub fn micro_macro_joint(phi: f64, gp: &GainParams, cutoff: CutoffSpec) -> Result<JointState> {
    let w = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    let branches = vec![
        Branch {
            alice: AliceOutcome::SingleOrthogonal,
            weight: w,
            bob: macro_single(SingleSeed::Aligned, phi, gp, cutoff)?,
        },
        Branch {
            alice: AliceOutcome::SingleAligned,
            weight: -w,
            bob: macro_single(SingleSeed::Orthogonal, phi, gp, cutoff)?,
        },
    ];
    Ok(JointState {
        branches,
        phi,
        gain: *gp,
        cutoff,
    })
}

/// The amplified spin-1 singlet:
/// `3^{-1/2}(|2φ⟩_A |Φ^{2φ⊥}⟩_B − |1φ;1φ⊥⟩_A |Φ^{φ,φ⊥}⟩_B + |2φ⊥⟩_A |Φ^{2φ}⟩_B)`.
pub fn spin1_joint(phi: f64, gp: &GainParams, cutoff: CutoffSpec) -> Result<JointState> {
    let w = Complex64::from(1.0 / 3.0f64.sqrt());
    let branches = vec![
        Branch {
            alice: AliceOutcome::TwoAligned,
            weight: w,
            bob: macro_two_photon_in(TwoPhotonKind::TwoOrthogonal, phi, gp, cutoff)?,
        },
        Branch {
            alice: AliceOutcome::OneEach,
            weight: -w,
            bob: macro_two_photon_in(TwoPhotonKind::OneEach, phi, gp, cutoff)?,
        },
        Branch {
            alice: AliceOutcome::TwoOrthogonal,
            weight: w,
            bob: macro_two_photon_in(TwoPhotonKind::TwoAligned, phi, gp, cutoff)?,
        },
    ];
    Ok(JointState {
        branches,
        phi,
        gain: *gp,
        cutoff,
    })
}

/// Project Alice's mode(s) onto `outcome` measured in basis `φ_a` and return
/// `(probability, Bob's normalized conditional state expressed in basis φ_b)`.
///
/// The returned state is defined up to a global phase; the branch weight's
/// sign is dropped. Both joints are singlets, so every valid outcome has the
/// same probability (½ for the micro–macro joint, ⅓ for spin-1) in every
/// analysis basis.
pub fn condition_on_alice(
    joint: &JointState,
    phi_a: f64,
    outcome: AliceOutcome,
    phi_b: f64,
) -> Result<(f64, TwoModeState)> {
    let kind = joint.kind();
    let valid = match kind {
        JointKind::MicroMacro => outcome.is_single_photon(),
        JointKind::Spin1 => !outcome.is_single_photon(),
    };
    if !valid {
        return Err(Error::Unsupported(format!(
            "Alice outcome {outcome:?} is not an outcome of a {kind:?} joint"
        )));
    }
    let gp = &joint.gain;
    let cutoff = joint.cutoff;
    // Basis-change angle for the seed kets: δ = φ_a − φ_b, with
    // c = cos(δ/2), s = sin(δ/2).
    let delta = phi_a - phi_b;
    let (c, s) = ((delta / 2.0).cos(), (delta / 2.0).sin());
    let probability = match kind {
        JointKind::MicroMacro => 0.5,
        JointKind::Spin1 => 1.0 / 3.0,
    };

    let bob = match outcome {
        // Micro joint: outcome |1φ_a⊥⟩ leaves Bob in U|1φ_a⟩ and vice versa.
        // |1φ_a⟩ = c|1φ_b⟩ + is|1φ_b⊥⟩, |1φ_a⊥⟩ = is|1φ_b⟩ + c|1φ_b⊥⟩.
        AliceOutcome::SingleOrthogonal => super::macro_states::macro_qubit(
            Complex64::from(c),
            Complex64::new(0.0, s),
            phi_b,
            gp,
            cutoff,
        )?,
        AliceOutcome::SingleAligned => super::macro_states::macro_qubit(
            Complex64::new(0.0, s),
            Complex64::from(c),
            phi_b,
            gp,
            cutoff,
        )?,
        // Spin-1 joint: outcome |2φ_a⟩ leaves Bob in U|2φ_a⊥⟩, outcome
        // |1φ_a;1φ_a⊥⟩ in U|1φ_a;1φ_a⊥⟩, outcome |2φ_a⊥⟩ in U|2φ_a⟩; the
        // seeds are expanded over the φ_b two-photon kets and pushed through
        // the amplifier's linearity.
        two_photon => {
            let coeffs: [Complex64; 3] = match two_photon {
                // |2φ_a⟩ → (c², i√2cs, −s²) on (|2φ_b⟩, |1;1⟩, |2φ_b⊥⟩)
                AliceOutcome::TwoOrthogonal => [
                    Complex64::from(c * c),
                    Complex64::new(0.0, std::f64::consts::SQRT_2 * c * s),
                    Complex64::from(-s * s),
                ],
                // |1φ_a;1φ_a⊥⟩ → (i√2cs, c²−s², i√2cs)
                AliceOutcome::OneEach => [
                    Complex64::new(0.0, std::f64::consts::SQRT_2 * c * s),
                    Complex64::from(c * c - s * s),
                    Complex64::new(0.0, std::f64::consts::SQRT_2 * c * s),
                ],
                // |2φ_a⊥⟩ → (−s², i√2cs, c²)
                AliceOutcome::TwoAligned => [
                    Complex64::from(-s * s),
                    Complex64::new(0.0, std::f64::consts::SQRT_2 * c * s),
                    Complex64::from(c * c),
                ],
                _ => unreachable!("single-photon outcomes handled above"),
            };
            let kinds = [
                TwoPhotonKind::TwoAligned,
                TwoPhotonKind::OneEach,
                TwoPhotonKind::TwoOrthogonal,
            ];
            let mut states = Vec::with_capacity(3);
            for (w, kind) in coeffs.iter().zip(kinds) {
                if w.norm_sqr() > 0.0 {
                    states.push((*w, macro_two_photon_in(kind, phi_b, gp, cutoff)?));
                }
            }
            let terms: Vec<(Complex64, &TwoModeState)> =
                states.iter().map(|(w, s)| (*w, s)).collect();
            TwoModeState::weighted_sum(&terms)?
        }
    };
    Ok((probability, bob))
}
