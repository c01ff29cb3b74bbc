//! Orchestration of full simulated experiments: fringe scans, the
//! separability (entanglement) test, the two-photon Bell test, and the
//! thermal characterization of the orthogonality filter.
//!
//! Every run first computes *exact* per-trial outcome probabilities — dense
//! amplitude pipelines below gain 2, closed-form separable photon-number
//! pipelines above (where sinh²g makes amplitude grids intractable) — and
//! then, unless exact mode is requested, draws reproducible counts from
//! counter-derived random streams. Merging is associative, so results are
//! byte-identical for any worker count and any setting order.

mod chsh;
mod config;
mod counts;
mod entangle;
mod fringe;
mod ofchar;
mod parallel;
mod pipeline;
mod separable;

pub use chsh::{run_chsh, ChshRun, ChshSettingRecord};
pub use config::{BobMeasurement, ExperimentConfig};
pub use counts::{
    sample_counts, CountsTable, FringePoint, FringeScan, OutcomeProbabilities,
};
pub use entangle::{run_entanglement_test, EntanglementResult, SettingRecord};
pub use fringe::run_micro_macro_fringe;
pub use ofchar::{run_of_characterization, OfCharPoint, OfCharacterization};
pub use separable::SeparableEngine;
