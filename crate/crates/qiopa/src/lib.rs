//! # qiopa — quantum-injected optical parametric amplifier simulator
//!
//! A desk-scale numerical model of a polarization entanglement experiment in
//! which one photon of an entangled pair is amplified into a multiphoton
//! field. The crate builds the relevant two-mode Fock states exactly (up to a
//! tracked truncation tail), pushes them through lossy threshold detection,
//! and reproduces the statistics a real counting experiment would record:
//! fringe visibilities, correlation functions, Bell-type sums, and filtering
//! probabilities.
//!
//! ## Layout
//!
//! - [`fock`] — truncated two-mode Fock states, basis rotations, and the
//!   amplifier unitary applied numerically.
//! - [`opa`] — closed-form amplified states (macro-qubits and friends), the
//!   micro–macro joint state, and collective spin operators.
//! - [`detection`] — photon loss, threshold/parity discrimination, and the
//!   orthogonality filter.
//! - [`analysis`] — visibilities, correlations, Bell sums, and concurrence.
//! - [`experiments`] — full simulated runs producing counts tables.
//! - [`io`] — config parsing and result emission for the CLI.
//!
//! ## Numerical contract
//!
//! Every state and distribution carries an explicit `tail_deficit`: the
//! probability mass its truncated grid cannot represent. Operations either
//! propagate that deficit honestly or refuse (with
//! [`Error::UnderTruncated`]) when the deficit would silently bias a result.

pub mod analysis;
pub mod detection;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod io;
pub mod opa;

pub use error::{Error, Result};
pub use fock::{CutoffSpec, Mode, ModeBasis, PhotonDistribution, TwoModeState};
pub use opa::GainParams;
