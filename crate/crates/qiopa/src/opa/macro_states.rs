//! Dense constructors for the amplified ("macro") states.
//!
//! Every state here is the amplifier image of a one- or two-photon seed in a
//! chosen equatorial basis φ. Because the amplifier factorizes per mode in
//! that basis, each constructor is an outer product of two closed-form 1-D
//! amplitude vectors from [`super::modes`], evaluated directly on the final
//! grid — no operator exponentials, no intermediate truncation.

use num_complex::Complex64;

use super::gain::GainParams;
use super::modes::{psi, ModeAmplitudes, SeedOccupation};
use crate::error::{Error, Result};
use crate::fock::{CutoffSpec, ModeBasis, TwoModeState};

/// Which single-photon seed the amplifier acts on, relative to basis φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingleSeed {
    /// Seed `|1φ⟩`: output occupies (odd, even) photon numbers.
    Aligned,
    /// Seed `|1φ⊥⟩`: output occupies (even, odd) photon numbers.
    Orthogonal,
}

/// Which two-photon seed the amplifier acts on, relative to basis φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoPhotonKind {
    /// Seed `|2φ⟩` (both photons in the basis mode): (even, even) support.
    TwoAligned,
    /// Seed `|2φ⊥⟩`: (even, even) support.
    TwoOrthogonal,
    /// Seed `|1φ; 1φ⊥⟩` (one photon in each mode): (odd, odd) support.
    OneEach,
}

/// Outer product of two real 1-D vectors as a validated state.
fn product_state(
    phi: f64,
    first: &ModeAmplitudes,
    second: &ModeAmplitudes,
) -> Result<TwoModeState> {
    let cutoff = first.cutoff().max(second.cutoff());
    let dim = cutoff + 1;
    let mut amps = vec![Complex64::ZERO; dim * dim];
    for (m, a) in first.amps.iter().enumerate() {
        if *a == 0.0 {
            continue;
        }
        for (n, b) in second.amps.iter().enumerate() {
            if *b != 0.0 {
                amps[m * dim + n] = Complex64::from(a * b);
            }
        }
    }
    // Total mass factors: Σ|c|² = (1−d₁)(1−d₂), so the product's deficit is
    // exactly d₁ + d₂ − d₁d₂.
    let deficit = first.deficit + second.deficit - first.deficit * second.deficit;
    TwoModeState::from_amplitudes(ModeBasis::equatorial(phi), cutoff, amps, deficit)
}

/// Split an adaptive tolerance across the two mode factors.
fn per_mode_spec(spec: CutoffSpec) -> CutoffSpec {
    match spec {
        CutoffSpec::Adaptive { eps_tail } => CutoffSpec::Adaptive {
            eps_tail: eps_tail / 2.0,
        },
        fixed => fixed,
    }
}

/// The amplified single-photon state `|Φ^φ⟩` (aligned) or `|Φ^{φ⊥}⟩`
/// (orthogonal) in basis `equatorial(φ)`.
///
/// The aligned state amplifies `|1φ⟩`: its basis mode carries the seeded
/// squeezed-|1⟩ vector (odd occupations, mean `3m̄+1`) and the orthogonal mode
/// squeezed vacuum (even occupations, mean `m̄`). The orthogonal state swaps
/// the roles. At `g = 0` the constructors return the bare seeds exactly.
pub fn macro_single(
    which: SingleSeed,
    phi: f64,
    gp: &GainParams,
    cutoff: CutoffSpec,
) -> Result<TwoModeState> {
    let spec = per_mode_spec(cutoff);
    let (first, second) = match which {
        SingleSeed::Aligned => (
            psi(SeedOccupation::One, -1.0, gp, spec)?,
            psi(SeedOccupation::Vacuum, 1.0, gp, spec)?,
        ),
        SingleSeed::Orthogonal => (
            psi(SeedOccupation::Vacuum, -1.0, gp, spec)?,
            psi(SeedOccupation::One, 1.0, gp, spec)?,
        ),
    };
    product_state(phi, &first, &second)
}

/// The amplified qubit `α|Φ^φ⟩ + β|Φ^{φ⊥}⟩`.
///
/// Requires `|α|² + |β|² = 1`. The two components occupy disjoint photon-
/// number parity sectors, so the superposition's number distribution is
/// exactly the `|α|²/|β|²`-weighted mixture of the component distributions.
pub fn macro_qubit(
    alpha: Complex64,
    beta: Complex64,
    phi: f64,
    gp: &GainParams,
    cutoff: CutoffSpec,
) -> Result<TwoModeState> {
    let total = alpha.norm_sqr() + beta.norm_sqr();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm_sqr: total });
    }
    let aligned = macro_single(SingleSeed::Aligned, phi, gp, cutoff)?;
    let orthogonal = macro_single(SingleSeed::Orthogonal, phi, gp, cutoff)?;
    TwoModeState::superpose(alpha, &aligned, beta, &orthogonal)
}

/// The amplified two-photon states, built in an arbitrary equatorial basis φ.
///
/// `TwoAligned` amplifies `|2φ⟩` (squeezed-|2⟩ ⊗ squeezed vacuum),
/// `TwoOrthogonal` amplifies `|2φ⊥⟩`, and `OneEach` amplifies `|1φ; 1φ⊥⟩`
/// (squeezed-|1⟩ in both modes). All three are exactly normalized by
/// construction and reduce to their seeds at `g = 0`.
pub fn macro_two_photon_in(
    kind: TwoPhotonKind,
    phi: f64,
    gp: &GainParams,
    cutoff: CutoffSpec,
) -> Result<TwoModeState> {
    let spec = per_mode_spec(cutoff);
    let (first, second) = match kind {
        TwoPhotonKind::TwoAligned => (
            psi(SeedOccupation::Two, -1.0, gp, spec)?,
            psi(SeedOccupation::Vacuum, 1.0, gp, spec)?,
        ),
        TwoPhotonKind::TwoOrthogonal => (
            psi(SeedOccupation::Vacuum, -1.0, gp, spec)?,
            psi(SeedOccupation::Two, 1.0, gp, spec)?,
        ),
        TwoPhotonKind::OneEach => (
            psi(SeedOccupation::One, -1.0, gp, spec)?,
            psi(SeedOccupation::One, 1.0, gp, spec)?,
        ),
    };
    product_state(phi, &first, &second)
}

/// The amplified two-photon states in the ± basis (equatorial φ = 0).
///
/// Convenience form of [`macro_two_photon_in`] for the basis in which these
/// states are usually quoted.
pub fn macro_two_photon(
    kind: TwoPhotonKind,
    gp: &GainParams,
    cutoff: CutoffSpec,
) -> Result<TwoModeState> {
    macro_two_photon_in(kind, 0.0, gp, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Mode;
    use approx::assert_abs_diff_eq;

    fn gp(g: f64) -> GainParams {
        GainParams::new(g).unwrap()
    }

    #[test]
    fn zero_gain_returns_bare_seeds() {
        let spec = CutoffSpec::default();
        let s = macro_single(SingleSeed::Aligned, 0.7, &gp(0.0), spec).unwrap();
        assert_eq!(s.amp(1, 0), Complex64::ONE);
        let s = macro_two_photon(TwoPhotonKind::TwoAligned, &gp(0.0), spec).unwrap();
        assert!((s.amp(2, 0) - Complex64::ONE).norm() < 1e-15);
        assert_eq!(s.amp(0, 0), Complex64::ZERO);
        let s = macro_two_photon(TwoPhotonKind::OneEach, &gp(0.0), spec).unwrap();
        assert_eq!(s.amp(1, 1), Complex64::ONE);
    }

    #[test]
    fn leading_amplitude_matches_gamma_normalization() {
        // ⟨1φ; 0φ⊥|Φ^φ⟩ = C^{-2} = 0.41997 at g = 1.
        let s = macro_single(SingleSeed::Aligned, 0.0, &gp(1.0), CutoffSpec::default()).unwrap();
        assert!((s.amp(1, 0).re - 0.41997).abs() < 1e-5);
        assert_eq!(s.amp(1, 0).im, 0.0);
    }

    #[test]
    fn parity_supports_are_exact() {
        let spec = CutoffSpec::default();
        let g1 = gp(1.0);
        let cases: [(_, fn(usize, usize) -> bool); 4] = [
            (
                macro_single(SingleSeed::Aligned, 0.3, &g1, spec).unwrap(),
                |m, n| m % 2 == 1 && n % 2 == 0,
            ),
            (
                macro_single(SingleSeed::Orthogonal, 0.3, &g1, spec).unwrap(),
                |m, n| m % 2 == 0 && n % 2 == 1,
            ),
            (
                macro_two_photon(TwoPhotonKind::TwoOrthogonal, &g1, spec).unwrap(),
                |m, n| m % 2 == 0 && n % 2 == 0,
            ),
            (
                macro_two_photon(TwoPhotonKind::OneEach, &g1, spec).unwrap(),
                |m, n| m % 2 == 1 && n % 2 == 1,
            ),
        ];
        for (state, allowed) in cases {
            for (m, n, _) in state.iter_nonzero() {
                assert!(allowed(m, n), "unexpected support at ({m},{n})");
            }
        }
    }

    #[test]
    fn macro_states_are_orthonormal() {
        let spec = CutoffSpec::Adaptive { eps_tail: 1e-10 };
        let g = gp(1.2);
        let a = macro_single(SingleSeed::Aligned, 1.0, &g, spec).unwrap();
        let o = macro_single(SingleSeed::Orthogonal, 1.0, &g, spec).unwrap();
        assert_abs_diff_eq!(a.norm_sqr() + a.tail_deficit(), 1.0, epsilon = 1e-9);
        assert_eq!(a.inner_product(&o).unwrap(), Complex64::ZERO);
        let p = macro_two_photon(TwoPhotonKind::TwoAligned, &g, spec).unwrap();
        let m = macro_two_photon(TwoPhotonKind::TwoOrthogonal, &g, spec).unwrap();
        // Same parity sector, orthogonal only through amplitude cancellation.
        assert!(p.inner_product(&m).unwrap().norm() < 1e-8);
        assert_abs_diff_eq!(p.norm_sqr() + p.tail_deficit(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn mean_photon_laws_and_their_interchange() {
        let g = gp(0.9);
        let mbar = g.mbar();
        let spec = CutoffSpec::Adaptive { eps_tail: 1e-10 };
        let a = macro_single(SingleSeed::Aligned, 0.0, &g, spec).unwrap();
        assert_abs_diff_eq!(
            a.mean_photon(Mode::First).unwrap(),
            3.0 * mbar + 1.0,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(a.mean_photon(Mode::Second).unwrap(), mbar, epsilon = 1e-6);
        let o = macro_single(SingleSeed::Orthogonal, 0.0, &g, spec).unwrap();
        assert_abs_diff_eq!(o.mean_photon(Mode::First).unwrap(), mbar, epsilon = 1e-6);
        assert_abs_diff_eq!(
            o.mean_photon(Mode::Second).unwrap(),
            3.0 * mbar + 1.0,
            epsilon = 1e-6
        );
    }

    #[test]
    fn qubit_mixes_distributions_without_interference() {
        let g = gp(1.0);
        let spec = CutoffSpec::default();
        let alpha = Complex64::from(0.5);
        let beta = Complex64::from(3.0f64.sqrt() / 2.0);
        let q = macro_qubit(alpha, beta, 0.0, &g, spec).unwrap();
        let a = macro_single(SingleSeed::Aligned, 0.0, &g, spec).unwrap();
        let o = macro_single(SingleSeed::Orthogonal, 0.0, &g, spec).unwrap();
        let (dq, da, do_) = (
            q.number_distribution(),
            a.number_distribution(),
            o.number_distribution(),
        );
        for (m, n) in [(1, 0), (0, 1), (3, 2), (2, 3), (1, 4), (5, 0)] {
            assert_abs_diff_eq!(
                dq.prob(m, n),
                0.25 * da.prob(m, n) + 0.75 * do_.prob(m, n),
                epsilon = 1e-12
            );
        }
        // Weighted mean photon number in the basis mode: ¼(3m̄+1) + ¾m̄.
        let mbar = g.mbar();
        let expected = 0.25 * (3.0 * mbar + 1.0) + 0.75 * mbar;
        assert_abs_diff_eq!(expected, 2.3216, epsilon = 1e-3);
        assert_abs_diff_eq!(q.mean_photon(Mode::First).unwrap(), expected, epsilon = 1e-6);
    }

    #[test]
    fn qubit_rejects_unnormalized_coefficients() {
        let g = gp(0.5);
        let err = macro_qubit(
            Complex64::from(1.0),
            Complex64::from(0.5),
            0.0,
            &g,
            CutoffSpec::default(),
        );
        assert!(matches!(err, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn closed_forms_match_numerical_evolution_at_small_gain() {
        // Catches any sign-convention drift between the analytic vectors and
        // the amplifier exponential.
        let g = 0.5;
        let basis = ModeBasis::equatorial(0.9);
        let evolved = crate::fock::squeeze::evolve_squeezer(
            &TwoModeState::fock_ket(basis, 1, 1, 0),
            g,
            CutoffSpec::Fixed { cutoff: 30 },
        )
        .unwrap();
        let built = macro_single(
            SingleSeed::Aligned,
            0.9,
            &gp(g),
            CutoffSpec::Adaptive { eps_tail: 1e-12 },
        )
        .unwrap();
        for m in 0..=10 {
            for n in 0..=10 {
                assert!(
                    (evolved.amp(m, n) - built.amp(m, n)).norm() < 1e-9,
                    "mismatch at ({m},{n}): {} vs {}",
                    evolved.amp(m, n),
                    built.amp(m, n)
                );
            }
        }
    }
}
