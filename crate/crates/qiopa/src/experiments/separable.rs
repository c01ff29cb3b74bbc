//! High-gain conditional statistics without dense grids.
//!
//! Above gain ≈ 2 the amplified amplitude grids stop being desk-scale, but
//! every Bob-side conditional state is a short superposition of *products*
//! of 1-D amplified mode vectors, and loss plus the filter decision act on
//! photon-number statistics alone. The engine therefore works entirely with
//! detected 1-D vectors:
//!
//! 1. Build the closed-form amplified vectors for the vacuum, one-photon and
//!    two-photon seeds, square them (probabilities) and form the signed
//!    interference products (two-photon seed × vacuum seed, the only cross
//!    term that survives the mode parity structure).
//! 2. Thin each vector to detected photons by the binomial-loss recurrence —
//!    a linear map, so it transports the signed vectors too.
//! 3. For each mode pair, accumulate the diagonal correlation
//!    c(δ) = Σₙ u(n+δ)·v(n) once; every filter query (any analyzer phase,
//!    threshold, jitter, or parity rule) is then a 1-D sum over δ.
//!
//! Conditional outcome weights follow from the singlet structure: writing
//! c = cos(δ/2), s = sin(δ/2) for the analyzer offset δ = φ_a − φ_b, the
//! trigger outcome picks a superposition of the amplified seeds whose
//! diagonal photon statistics are the weighted product terms below. All
//! other interference terms vanish identically: they pair amplified vectors
//! of opposite occupation parity.

use crate::detection::{
    gaussian_plus_weight, thermal_vector, thin_vector, DetectorChain, Discriminator,
    OfProbabilities,
};
use crate::error::{Error, Result};
use crate::fock::math::KahanSum;
use crate::fock::CutoffSpec;
use crate::opa::modes::{psi, ModeAmplitudes, SeedOccupation};
use crate::opa::{AliceOutcome, GainParams, JointKind};

/// Diagonal correlation of a detected mode pair, with the parity sums needed
/// by the parity discriminator. Entries may be signed (interference terms).
struct PairCorr {
    /// c[i] = Σₙ u(n + i − off)·v(n); index i maps to δ = i − off.
    c: Vec<f64>,
    off: usize,
    u_odd: f64,
    u_even: f64,
    v_total: f64,
}

impl PairCorr {
    fn build(u: &[f64], v: &[f64]) -> PairCorr {
        assert!(!u.is_empty() && !v.is_empty());
        let off = v.len() - 1;
        let mut c = vec![0.0; u.len() + v.len() - 1];
        for (m, &um) in u.iter().enumerate() {
            if um == 0.0 {
                continue;
            }
            for (n, &vn) in v.iter().enumerate() {
                c[m + off - n] += um * vn;
            }
        }
        let mut u_odd = KahanSum::new();
        let mut u_even = KahanSum::new();
        for (n, &un) in u.iter().enumerate() {
            if n % 2 == 1 {
                u_odd.add(un);
            } else {
                u_even.add(un);
            }
        }
        PairCorr {
            c,
            off,
            u_odd: u_odd.value(),
            u_even: u_even.value(),
            v_total: kahan_slice(v),
        }
    }

    /// Total (signed) mass of the pair on its grid.
    fn mass(&self) -> f64 {
        (self.u_odd + self.u_even) * self.v_total
    }

    /// (plus, minus) weights of the filter decision applied to this pair.
    /// Mirrors the dense filter exactly: strict threshold comparison on the
    /// count difference, analytic Gaussian smearing when jitter is present,
    /// odd/even first-mode parity for the parity rule.
    fn split(&self, chain: &DetectorChain) -> (f64, f64) {
        match chain.discriminator {
            Discriminator::Parity => (self.u_odd * self.v_total, self.u_even * self.v_total),
            Discriminator::Threshold if chain.sigma_noise == 0.0 => {
                let mut plus = KahanSum::new();
                let mut minus = KahanSum::new();
                for (i, &ci) in self.c.iter().enumerate() {
                    if ci == 0.0 {
                        continue;
                    }
                    let delta = i as f64 - self.off as f64;
                    if delta > chain.threshold_k {
                        plus.add(ci);
                    } else if -delta > chain.threshold_k {
                        minus.add(ci);
                    }
                }
                (plus.value(), minus.value())
            }
            Discriminator::Threshold => {
                let mut plus = KahanSum::new();
                let mut minus = KahanSum::new();
                for (i, &ci) in self.c.iter().enumerate() {
                    if ci == 0.0 {
                        continue;
                    }
                    let delta = i as f64 - self.off as f64;
                    plus.add(ci * gaussian_plus_weight(delta, chain));
                    minus.add(ci * gaussian_plus_weight(-delta, chain));
                }
                (plus.value(), minus.value())
            }
        }
    }
}

fn kahan_slice(v: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for &x in v {
        acc.add(x);
    }
    acc.value()
}

/// Detected-grid length for an input vector of `in_len` entries under
/// efficiency η: the binomial image of the largest occupation plus a 12σ
/// guard band. Never larger than the input grid.
fn detected_len(in_len: usize, eta: f64) -> usize {
    if eta >= 1.0 {
        return in_len;
    }
    let n = (in_len - 1) as f64;
    let guard = (eta * n + 12.0 * (eta * (1.0 - eta) * n).sqrt()).ceil() as usize + 64;
    guard.min(in_len).max(1)
}

/// Build one single-mode amplitude vector, refusing when its truncated tail
/// would bias the correlations built from it.
fn checked_psi(
    seed: SeedOccupation,
    sigma: f64,
    gp: &GainParams,
    spec: CutoffSpec,
) -> Result<ModeAmplitudes> {
    use crate::experiments::pipeline::CONDITIONAL_DEFICIT_TOL;
    let m = psi(seed, sigma, gp, spec)?;
    if m.deficit >= CONDITIONAL_DEFICIT_TOL {
        return Err(Error::UnderTruncated {
            deficit: m.deficit,
            tolerance: CONDITIONAL_DEFICIT_TOL,
            suggested_cutoff: m.amps.len() * 2,
        });
    }
    Ok(m)
}

/// Square an amplitude vector and thin it to detected photons.
fn thin_squares(m: &ModeAmplitudes, eta: f64) -> Vec<f64> {
    let squares: Vec<f64> = m.amps.iter().map(|a| a * a).collect();
    thin_vector(&squares, eta, detected_len(squares.len(), eta)).0
}

/// Element-wise product of two amplitude vectors (signed interference term),
/// thinned to detected photons.
fn thin_product(a: &ModeAmplitudes, b: &ModeAmplitudes, eta: f64) -> Vec<f64> {
    let len = a.amps.len().min(b.amps.len());
    let prod: Vec<f64> = (0..len).map(|n| a.amps[n] * b.amps[n]).collect();
    thin_vector(&prod, eta, detected_len(len, eta)).0
}

/// Exact filter statistics for high-gain conditional states, computed from
/// detected 1-D mode vectors and their diagonal correlations.
///
/// Built once per (joint kind, gain, efficiency, cutoff policy); each query
/// then costs one pass over the correlation vectors. The `chain` passed to
/// queries must carry the same efficiency the engine was built with — the
/// loss stage has already been applied to the stored vectors.
pub struct SeparableEngine {
    kind: JointKind,
    eta: f64,
    pairs: Vec<PairCorr>,
}

impl SeparableEngine {
    pub fn new(kind: JointKind, gp: &GainParams, eta: f64, spec: CutoffSpec) -> Result<Self> {
        if !eta.is_finite() || !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidEfficiency { eta });
        }
        let pairs = match kind {
            JointKind::MicroMacro => {
                let m0 = checked_psi(SeedOccupation::Vacuum, -1.0, gp, spec)?;
                let m1 = checked_psi(SeedOccupation::One, -1.0, gp, spec)?;
                let t0 = thin_squares(&m0, eta);
                let t1 = thin_squares(&m1, eta);
                // Pair order: [aligned ⊗ orthogonal] = [(1,0), (0,1)].
                vec![PairCorr::build(&t1, &t0), PairCorr::build(&t0, &t1)]
            }
            JointKind::Spin1 => {
                let m0 = checked_psi(SeedOccupation::Vacuum, -1.0, gp, spec)?;
                let m1m = checked_psi(SeedOccupation::One, -1.0, gp, spec)?;
                let m1p = checked_psi(SeedOccupation::One, 1.0, gp, spec)?;
                let m2 = checked_psi(SeedOccupation::Two, -1.0, gp, spec)?;
                let v0 = checked_psi(SeedOccupation::Vacuum, 1.0, gp, spec)?;
                let v2 = checked_psi(SeedOccupation::Two, 1.0, gp, spec)?;
                let t0 = thin_squares(&m0, eta);
                let t1m = thin_squares(&m1m, eta);
                let t1p = thin_squares(&m1p, eta);
                let t2 = thin_squares(&m2, eta);
                // Signed interference vectors: two-photon seed × vacuum seed
                // on each mode, with the mode's own squeezer sign.
                let xm = thin_product(&m2, &m0, eta);
                let xp = thin_product(&v0, &v2, eta);
                // Pair order: [(2,0), (1,1), (0,2), cross].
                vec![
                    PairCorr::build(&t2, &t0),
                    PairCorr::build(&t1m, &t1p),
                    PairCorr::build(&t0, &t2),
                    PairCorr::build(&xm, &xp),
                ]
            }
        };
        Ok(SeparableEngine { kind, eta, pairs })
    }

    /// Which joint this engine serves.
    pub fn kind(&self) -> JointKind {
        self.kind
    }

    /// Filter outcome probabilities for Bob's state conditioned on the given
    /// trigger outcome at analyzer offset δ = φ_a − φ_b. The probabilities
    /// sum to the conditional state's grid mass (tail truncation shows up as
    /// abstention downstream).
    pub fn conditional_probs(
        &self,
        outcome: AliceOutcome,
        delta: f64,
        chain: &DetectorChain,
    ) -> Result<OfProbabilities> {
        chain.validate()?;
        debug_assert!(
            (chain.eta - self.eta).abs() < 1e-12,
            "engine built for η = {}, queried with η = {}",
            self.eta,
            chain.eta
        );
        let (c, s) = ((delta / 2.0).cos(), (delta / 2.0).sin());
        let (c2, s2) = (c * c, s * s);
        let terms: &[(f64, usize)] = match (self.kind, outcome) {
            (JointKind::MicroMacro, AliceOutcome::SingleAligned) => &[(s2, 0), (c2, 1)],
            (JointKind::MicroMacro, AliceOutcome::SingleOrthogonal) => &[(c2, 0), (s2, 1)],
            (JointKind::Spin1, AliceOutcome::TwoOrthogonal) => &[
                (c2 * c2, 0),
                (2.0 * c2 * s2, 1),
                (s2 * s2, 2),
                (-2.0 * c2 * s2, 3),
            ],
            (JointKind::Spin1, AliceOutcome::OneEach) => &[
                (2.0 * c2 * s2, 0),
                ((c2 - s2) * (c2 - s2), 1),
                (2.0 * c2 * s2, 2),
                (4.0 * c2 * s2, 3),
            ],
            (JointKind::Spin1, AliceOutcome::TwoAligned) => &[
                (s2 * s2, 0),
                (2.0 * c2 * s2, 1),
                (c2 * c2, 2),
                (-2.0 * c2 * s2, 3),
            ],
            (kind, outcome) => {
                return Err(Error::Unsupported(format!(
                    "trigger outcome {outcome:?} is not an outcome of a {kind:?} joint"
                )))
            }
        };
        let mut plus = 0.0;
        let mut minus = 0.0;
        let mut mass = 0.0;
        for &(w, idx) in terms {
            let pair = &self.pairs[idx];
            let (p, m) = pair.split(chain);
            plus += w * p;
            minus += w * m;
            mass += w * pair.mass();
        }
        Ok(OfProbabilities {
            p_plus: plus.max(0.0),
            p_minus: minus.max(0.0),
            p_inconclusive: (mass - plus - minus).max(0.0),
        })
    }
}

/// Per-mode detected mean of the accidental background, matched to the mean
/// photon flux of the joint's own amplified (Bob-side) reduction.
pub(crate) fn background_mean(kind: JointKind, gp: &GainParams, eta: f64) -> f64 {
    let mbar = gp.mbar();
    match kind {
        // Reduced Bob state: equal mixture of (1,0) and (0,1) amplified
        // seeds; total mean 4m̄ + 1 over the two modes.
        JointKind::MicroMacro => eta * (4.0 * mbar + 1.0) / 2.0,
        // Equal mixture of (2,0), (1,1), (0,2); total mean 6m̄ + 2.
        JointKind::Spin1 => eta * (3.0 * mbar + 1.0),
    }
}

/// Filter outcome probabilities for an uncorrelated thermal background: both
/// filter modes carry independent thermal light of the given *detected* mean
/// (no further loss is applied).
pub(crate) fn thermal_background_probs(
    mean: f64,
    chain: &DetectorChain,
) -> Result<OfProbabilities> {
    if !mean.is_finite() || mean < 0.0 {
        return Err(Error::InvalidParameter {
            name: "mean",
            value: mean,
            constraint: "thermal mean must be finite and ≥ 0",
        });
    }
    chain.validate()?;
    let (t, _) = thermal_vector(mean, 1e-12);
    let pair = PairCorr::build(&t, &t);
    let (plus, minus) = pair.split(chain);
    Ok(OfProbabilities {
        p_plus: plus,
        p_minus: minus,
        p_inconclusive: (pair.mass() - plus - minus).max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::of_probabilities;
    use crate::opa::{condition_on_alice, micro_macro_joint, spin1_joint};

    fn dense_probs(
        kind: JointKind,
        g: f64,
        phi_a: f64,
        phi_b: f64,
        outcome: AliceOutcome,
        chain: &DetectorChain,
    ) -> OfProbabilities {
        let gp = GainParams::new(g).unwrap();
        let spec = CutoffSpec::Adaptive { eps_tail: 1e-10 };
        let joint = match kind {
            JointKind::MicroMacro => micro_macro_joint(phi_b, &gp, spec).unwrap(),
            JointKind::Spin1 => spin1_joint(phi_b, &gp, spec).unwrap(),
        };
        let (_, bob) = condition_on_alice(&joint, phi_a, outcome, phi_b).unwrap();
        of_probabilities(&bob.number_distribution(), chain).unwrap()
    }

    fn engine(kind: JointKind, g: f64, eta: f64) -> SeparableEngine {
        let gp = GainParams::new(g).unwrap();
        SeparableEngine::new(kind, &gp, eta, CutoffSpec::Adaptive { eps_tail: 1e-10 }).unwrap()
    }

    #[test]
    fn micro_engine_matches_dense_pipeline() {
        let chain = DetectorChain {
            eta: 0.37,
            threshold_k: 2.0,
            ..DetectorChain::default()
        };
        let eng = engine(JointKind::MicroMacro, 1.2, chain.eta);
        for (phi_a, outcome) in [
            (0.9, AliceOutcome::SingleAligned),
            (0.9, AliceOutcome::SingleOrthogonal),
            (2.4, AliceOutcome::SingleAligned),
        ] {
            let phi_b = 0.3;
            let want = dense_probs(JointKind::MicroMacro, 1.2, phi_a, phi_b, outcome, &chain);
            let got = eng.conditional_probs(outcome, phi_a - phi_b, &chain).unwrap();
            assert!(
                (got.p_plus - want.p_plus).abs() < 1e-9
                    && (got.p_minus - want.p_minus).abs() < 1e-9
                    && (got.p_inconclusive - want.p_inconclusive).abs() < 1e-8,
                "outcome {outcome:?}: {got:?} vs {want:?}"
            );
        }
    }

    #[test]
    fn spin1_engine_matches_dense_pipeline() {
        let chain = DetectorChain {
            eta: 0.5,
            threshold_k: 1.0,
            ..DetectorChain::default()
        };
        let eng = engine(JointKind::Spin1, 1.0, chain.eta);
        for outcome in [
            AliceOutcome::TwoOrthogonal,
            AliceOutcome::OneEach,
            AliceOutcome::TwoAligned,
        ] {
            let (phi_a, phi_b) = (2.1, 0.45);
            let want = dense_probs(JointKind::Spin1, 1.0, phi_a, phi_b, outcome, &chain);
            let got = eng.conditional_probs(outcome, phi_a - phi_b, &chain).unwrap();
            assert!(
                (got.p_plus - want.p_plus).abs() < 1e-9
                    && (got.p_minus - want.p_minus).abs() < 1e-9
                    && (got.p_inconclusive - want.p_inconclusive).abs() < 1e-8,
                "outcome {outcome:?}: {got:?} vs {want:?}"
            );
        }
    }

    #[test]
    fn parity_rule_agrees_with_dense_pipeline() {
        let chain = DetectorChain {
            eta: 1.0,
            discriminator: Discriminator::Parity,
            ..DetectorChain::default()
        };
        let eng = engine(JointKind::MicroMacro, 0.9, 1.0);
        let want = dense_probs(
            JointKind::MicroMacro,
            0.9,
            1.1,
            0.2,
            AliceOutcome::SingleOrthogonal,
            &chain,
        );
        let got = eng
            .conditional_probs(AliceOutcome::SingleOrthogonal, 1.1 - 0.2, &chain)
            .unwrap();
        assert!((got.p_plus - want.p_plus).abs() < 1e-10);
        assert!((got.p_minus - want.p_minus).abs() < 1e-10);
        assert_eq!(got.p_inconclusive, 0.0);
    }

    #[test]
    fn thermal_background_matches_geometric_closed_form() {
        // For independent geometric modes with ratio q, the count difference
        // obeys P(δ) = (1−q)q^|δ|/(1+q), so the plus mass above an integer
        // threshold d₀ = ⌊k⌋+1 is q^{d₀}/(1+q).
        let mean = 3.7;
        let q: f64 = mean / (1.0 + mean);
        let chain = DetectorChain {
            threshold_k: 5.0,
            ..DetectorChain::default()
        };
        let probs = thermal_background_probs(mean, &chain).unwrap();
        let want = q.powi(6) / (1.0 + q);
        assert!((probs.p_plus - want).abs() < 1e-10, "{probs:?} vs {want}");
        assert!((probs.p_minus - want).abs() < 1e-10);
        assert!(
            (probs.p_plus + probs.p_minus + probs.p_inconclusive - 1.0).abs() < 1e-9,
            "thermal split must exhaust the distribution"
        );
    }

    #[test]
    fn high_gain_engine_is_fast_and_consistent() {
        // Gain 3 with 3% efficiency: dense grids are impossible here, the
        // separable route must still produce a tight partition of unity and
        // an abstention that grows with the threshold.
        let chain = DetectorChain {
            eta: 0.03,
            threshold_k: 0.0,
            ..DetectorChain::default()
        };
        let eng = engine(JointKind::Spin1, 3.0, 0.03);
        let mut previous_inc = -1.0;
        for k in [0.0, 2.0, 8.0, 20.0] {
            let chain_k = chain.with_threshold(k);
            let p = eng
                .conditional_probs(AliceOutcome::TwoOrthogonal, 0.0, &chain_k)
                .unwrap();
            let total = p.p_plus + p.p_minus + p.p_inconclusive;
            assert!((total - 1.0).abs() < 1e-6, "k={k}: total={total}");
            assert!(p.p_inconclusive >= previous_inc, "abstention must grow in k");
            previous_inc = p.p_inconclusive;
        }
    }

    #[test]
    fn mismatched_outcome_kind_is_rejected() {
        let eng = engine(JointKind::MicroMacro, 1.0, 0.5);
        let chain = DetectorChain {
            eta: 0.5,
            ..DetectorChain::default()
        };
        assert!(eng
            .conditional_probs(AliceOutcome::TwoAligned, 0.0, &chain)
            .is_err());
    }
}
