//! Estimators and closed-form laws: visibilities, the separability bound,
//! Bell correlations, the two-photon fringe law, the thermal threshold
//! probability, and the two-qubit concurrence.
//!
//! Everything here is a pure function of counts, probabilities, or supplied
//! matrices. Error bars follow the multinomial delta method: for a
//! correlation estimated from N conclusive events, σ_E = √((1 − E²)/N), and
//! derived quantities propagate in quadrature.

mod concurrence;
mod correlation;
mod laws;
mod visibility;

pub use concurrence::wootters_concurrence;
pub use correlation::{chsh_s, correlation_e, separability_s, ChshResult};
pub use laws::{thermal_threshold_prob, two_photon_fringe_exact, two_photon_fringe_law};
pub use visibility::{visibility_fringe, visibility_probs, VisibilityResult};
