//! Closed-form single-mode amplitude vectors.
//!
//! In any equatorial basis the amplifier factorizes into two independent
//! single-mode squeezers with opposite signs, so every amplified state built
//! here is an outer product of two real 1-D amplitude vectors. This module
//! produces those vectors from the closed forms for a squeezer acting on
//! `|0⟩`, `|1⟩` and `|2⟩`, assembling each amplitude in the log domain (the
//! factorial ratios overflow `f64` even though the amplitudes themselves
//! never do).

use super::coeff::ln_sqrt_factorial;
use super::gain::GainParams;
use crate::error::{Error, Result};
use crate::fock::math::{ln_factorial, KahanSum};
use crate::fock::CutoffSpec;

/// Which Fock seed the single-mode squeezer acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SeedOccupation {
    Vacuum,
    One,
    Two,
}

/// A real 1-D amplitude vector over occupations `0..=cutoff`, plus the
/// probability mass beyond it.
#[derive(Clone, Debug)]
pub(crate) struct ModeAmplitudes {
    pub amps: Vec<f64>,
    pub deficit: f64,
}

impl ModeAmplitudes {
    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    /// Σ amp², compensated.
    #[cfg(test)]
    pub fn mass(&self) -> f64 {
        let mut acc = KahanSum::new();
        for a in &self.amps {
            acc.add(a * a);
        }
        acc.value()
    }

    /// Mean occupation over the grid.
    #[cfg(test)]
    pub fn mean(&self) -> f64 {
        let mut acc = KahanSum::new();
        for (n, a) in self.amps.iter().enumerate() {
            acc.add(n as f64 * a * a);
        }
        acc.value()
    }
}

/// Squeezed-|0⟩ amplitude on occupation `2j`:
/// `σ^j C^{-1/2} (Γ/2)^j √((2j)!)/j!`.
fn squeezed_vacuum_amp(j: u64, sigma: f64, gp: &GainParams) -> f64 {
    let ln_half_gamma = (gp.gamma() / 2.0).ln();
    let ln_mag = -0.5 * gp.c().ln()
        + if j == 0 { 0.0 } else { j as f64 * ln_half_gamma }
        + ln_sqrt_factorial(2 * j)
        - ln_factorial(j);
    sign_pow(sigma, j) * ln_mag.exp()
}

/// σ^j for σ = ±1 without the borrow dance above.
fn sign_pow(sigma: f64, j: u64) -> f64 {
    if sigma < 0.0 && j % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Squeezed-|1⟩ amplitude on occupation `2i+1`:
/// `σ^i C^{-3/2} (Γ/2)^i √((2i+1)!)/i!`.
fn squeezed_one_amp(i: u64, sigma: f64, gp: &GainParams) -> f64 {
    let ln_half_gamma = (gp.gamma() / 2.0).ln();
    let ln_mag = -1.5 * gp.c().ln()
        + if i == 0 { 0.0 } else { i as f64 * ln_half_gamma }
        + ln_sqrt_factorial(2 * i + 1)
        - ln_factorial(i);
    sign_pow(sigma, i) * ln_mag.exp()
}

/// Squeezed-|2⟩ amplitude on occupation `2u`, from the squeezed-vacuum family:
/// `d_u = 2^{-1/2}[C²√(2u(2u−1))·s_{u−1} − σCS(4u+1)·s_u + S²√((2u+1)(2u+2))·s_{u+1}]`.
fn squeezed_two_amp(u: u64, sigma: f64, gp: &GainParams) -> f64 {
    let (c, s) = (gp.c(), gp.s());
    let term_prev = if u == 0 {
        0.0
    } else {
        c * c * ((2 * u * (2 * u - 1)) as f64).sqrt() * squeezed_vacuum_amp(u - 1, sigma, gp)
    };
    let term_same = -sigma * c * s * (4 * u + 1) as f64 * squeezed_vacuum_amp(u, sigma, gp);
    let term_next =
        s * s * (((2 * u + 1) * (2 * u + 2)) as f64).sqrt() * squeezed_vacuum_amp(u + 1, sigma, gp);
    std::f64::consts::FRAC_1_SQRT_2 * (term_prev + term_same + term_next)
}

/// Build the amplitude vector of the squeezer `V(σg) = exp[½σg(a†² − a²)]`
/// applied to `seed`. The amplifier acts as `V(−g)` on the first
/// (basis-defining) equatorial mode and `V(+g)` on the orthogonal one, so
/// `sigma = −1` selects the first mode's factor and `sigma = +1` the second's.
///
/// With [`CutoffSpec::Adaptive`] the vector grows until the analytically
/// normalized mass reaches `1 − eps_tail`; with [`CutoffSpec::Fixed`] it is
/// evaluated on exactly `0..=cutoff` and the deficit reports whatever mass
/// lies beyond.
pub(crate) fn psi(
    seed: SeedOccupation,
    sigma: f64,
    gp: &GainParams,
    spec: CutoffSpec,
) -> Result<ModeAmplitudes> {
    debug_assert!(sigma == 1.0 || sigma == -1.0);
    let amp_at = |n: usize| -> f64 {
        match seed {
            SeedOccupation::Vacuum => {
                if n % 2 == 0 {
                    squeezed_vacuum_amp(n as u64 / 2, sigma, gp)
                } else {
                    0.0
                }
            }
            SeedOccupation::One => {
                if n % 2 == 1 {
                    squeezed_one_amp((n as u64 - 1) / 2, sigma, gp)
                } else {
                    0.0
                }
            }
            SeedOccupation::Two => {
                if n % 2 == 0 {
                    squeezed_two_amp(n as u64 / 2, sigma, gp)
                } else {
                    0.0
                }
            }
        }
    };

    match spec {
        CutoffSpec::Fixed { cutoff } => {
            let amps: Vec<f64> = (0..=cutoff).map(amp_at).collect();
            let out = ModeAmplitudes {
                deficit: (1.0 - {
                    let mut acc = KahanSum::new();
                    for a in &amps {
                        acc.add(a * a);
                    }
                    acc.value()
                })
                .max(0.0),
                amps,
            };
            Ok(out)
        }
        CutoffSpec::Adaptive { eps_tail } => {
            let eps = if eps_tail > 0.0 {
                eps_tail
            } else {
                CutoffSpec::DEFAULT_EPS_TAIL
            };
            let mut amps = Vec::with_capacity(CutoffSpec::initial_cutoff(gp.g()) + 2);
            let mut mass = KahanSum::new();
            let mut n = 0usize;
            loop {
                let a = amp_at(n);
                amps.push(a);
                mass.add(a * a);
                let deficit = 1.0 - mass.value();
                // Both parities of a pair must be in before testing the tail.
                if n % 2 == 1 && deficit <= eps {
                    return Ok(ModeAmplitudes {
                        amps,
                        deficit: deficit.max(0.0),
                    });
                }
                if n >= CutoffSpec::MAX_MODE_CUTOFF {
                    return Err(Error::UnderTruncated {
                        deficit,
                        tolerance: eps,
                        suggested_cutoff: 2 * CutoffSpec::MAX_MODE_CUTOFF,
                    });
                }
                n += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn adaptive(eps: f64) -> CutoffSpec {
        CutoffSpec::Adaptive { eps_tail: eps }
    }

    #[test]
    fn zero_gain_returns_the_seed() {
        let gp = GainParams::new(0.0).unwrap();
        for (seed, n) in [
            (SeedOccupation::Vacuum, 0),
            (SeedOccupation::One, 1),
            (SeedOccupation::Two, 2),
        ] {
            let v = psi(seed, -1.0, &gp, CutoffSpec::Fixed { cutoff: 4 }).unwrap();
            for (k, a) in v.amps.iter().enumerate() {
                let expected = if k == n { 1.0 } else { 0.0 };
                assert!(
                    (*a - expected).abs() < 1e-15,
                    "seed {seed:?} occupation {k}: {a}"
                );
            }
            assert!(v.deficit.abs() < 1e-15);
        }
    }

    #[test]
    fn vectors_are_normalized_with_tracked_tails() {
        let gp = GainParams::new(1.3).unwrap();
        for seed in [
            SeedOccupation::Vacuum,
            SeedOccupation::One,
            SeedOccupation::Two,
        ] {
            for sigma in [-1.0, 1.0] {
                let v = psi(seed, sigma, &gp, adaptive(1e-10)).unwrap();
                assert!(v.deficit <= 1e-10, "seed {seed:?} deficit {}", v.deficit);
                assert_abs_diff_eq!(v.mass() + v.deficit, 1.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn mean_occupations_follow_the_gain_laws() {
        // Squeezing |p⟩ gives mean p·cosh(2g) + sinh²g = m̄, 3m̄+1, 5m̄+2.
        let gp = GainParams::new(1.1).unwrap();
        let mbar = gp.mbar();
        let expectations = [
            (SeedOccupation::Vacuum, mbar),
            (SeedOccupation::One, 3.0 * mbar + 1.0),
            (SeedOccupation::Two, 5.0 * mbar + 2.0),
        ];
        for (seed, expected) in expectations {
            for sigma in [-1.0, 1.0] {
                let v = psi(seed, sigma, &gp, adaptive(1e-11)).unwrap();
                assert_abs_diff_eq!(v.mean(), expected, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn sign_pattern_alternates_with_sigma() {
        let gp = GainParams::new(0.7).unwrap();
        let minus = psi(SeedOccupation::Vacuum, -1.0, &gp, adaptive(1e-9)).unwrap();
        let plus = psi(SeedOccupation::Vacuum, 1.0, &gp, adaptive(1e-9)).unwrap();
        assert!(minus.amps[0] > 0.0 && plus.amps[0] > 0.0);
        assert!(minus.amps[2] < 0.0 && plus.amps[2] > 0.0);
        assert!(minus.amps[4] > 0.0 && plus.amps[4] > 0.0);
        assert_abs_diff_eq!(minus.amps[2], -plus.amps[2], epsilon = 1e-15);
    }

    #[test]
    fn squeezed_two_reduces_to_known_leading_amplitude() {
        // d₀ = −σ·S/(√2·C^{3/2}).
        let gp = GainParams::new(0.9).unwrap();
        let expected = gp.s() / (std::f64::consts::SQRT_2 * gp.c().powf(1.5));
        let minus = psi(SeedOccupation::Two, -1.0, &gp, adaptive(1e-9)).unwrap();
        assert_abs_diff_eq!(minus.amps[0], expected, epsilon = 1e-14);
        let plus = psi(SeedOccupation::Two, 1.0, &gp, adaptive(1e-9)).unwrap();
        assert_abs_diff_eq!(plus.amps[0], -expected, epsilon = 1e-14);
    }

    #[test]
    fn large_gain_vectors_stay_finite_and_normalized() {
        let gp = GainParams::new(4.4).unwrap();
        let v = psi(SeedOccupation::One, -1.0, &gp, adaptive(1e-8)).unwrap();
        assert!(v.cutoff() > 1000, "cutoff {}", v.cutoff());
        assert!(v.amps.iter().all(|a| a.is_finite()));
        assert!(v.deficit <= 1e-8);
        assert_abs_diff_eq!(
            v.mean(),
            3.0 * gp.mbar() + 1.0,
            epsilon = 1e-3 * (3.0 * gp.mbar() + 1.0)
        );
    }
}
