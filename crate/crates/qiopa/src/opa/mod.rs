//! Analytic constructors for the amplified states and their entanglement
//! structure.
//!
//! The amplifier maps single- and two-photon polarization seeds into
//! multiphoton "macro" states with closed-form amplitudes. This module builds
//! those states directly on the truncated grid ([`macro_single`],
//! [`macro_qubit`], [`macro_two_photon`]), assembles the entangled joints
//! shared between Alice's unamplified photons and Bob's amplified field
//! ([`micro_macro_joint`], [`spin1_joint`]), projects them on Alice outcomes
//! ([`condition_on_alice`]), and exposes the collective spin observables of
//! the amplified qubit ([`macro_spin_operator`]).

mod coeff;
mod gain;
mod joint;
mod macro_states;
pub(crate) mod modes;
mod spin;

pub use coeff::{gamma_coeff, LogCoeff};
pub use gain::GainParams;
pub use joint::{
    condition_on_alice, micro_macro_joint, spin1_joint, AliceOutcome, Branch, JointKind,
    JointState,
};
pub use macro_states::{
    macro_qubit, macro_single, macro_two_photon, macro_two_photon_in, SingleSeed, TwoPhotonKind,
};
pub use spin::{macro_spin_operator, MacroSpinOperator, SpinAxis};
