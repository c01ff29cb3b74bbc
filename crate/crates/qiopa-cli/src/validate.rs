//! The invariant suite behind `qiopa validate`.
//!
//! Each check exercises one structural property the simulator promises:
//! closed-form photon statistics, state orthogonality, filter monotonicity
//! and phase covariance, exact-versus-sampled consistency, worker-count
//! determinism, and the thermal threshold law. One `PASS`/`FAIL` line is
//! printed per check; the caller maps any failure to a numerical exit code.

use qiopa::analysis::thermal_threshold_prob;
use qiopa::detection::{of_probabilities, DetectorChain, Discriminator};
use qiopa::experiments::{run_micro_macro_fringe, run_of_characterization, ExperimentConfig};
use qiopa::fock::Mode;
use qiopa::opa::{
    condition_on_alice, macro_two_photon, macro_single, micro_macro_joint, AliceOutcome,
    GainParams, SingleSeed, TwoPhotonKind,
};
use qiopa::CutoffSpec;
use std::f64::consts::{FRAC_PI_2, PI};

type Check = (&'static str, Box<dyn Fn() -> Result<(), String>>);

/// Run every invariant check; `Err(n)` reports how many failed.
pub fn run(cfg: &ExperimentConfig) -> Result<(), usize> {
    let seed = cfg.rng_seed;
    let checks: Vec<Check> = vec![
        ("mean photon numbers follow the closed forms", Box::new(mean_photon_laws)),
        ("amplified two-photon states are orthogonal", Box::new(two_photon_orthogonality)),
        ("filter abstention is monotone in the threshold", Box::new(abstention_monotone)),
        ("filter statistics are phase covariant", Box::new(phase_covariance)),
        (
            "sampled counts track exact probabilities (4σ)",
            Box::new(move || sampling_consistency(seed)),
        ),
        (
            "outputs are identical for 1 and 8 workers",
            Box::new(move || worker_determinism(seed)),
        ),
        (
            "thermal exceedance matches the threshold law (4σ)",
            Box::new(move || thermal_law(seed)),
        ),
    ];
    let mut failed = 0usize;
    for (name, check) in &checks {
        match check() {
            Ok(()) => println!("PASS  {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("invariants: {} passed, {} failed", checks.len() - failed, failed);
    if failed == 0 {
        Ok(())
    } else {
        Err(failed)
    }
}

fn lib(e: qiopa::Error) -> String {
    e.to_string()
}

fn close(value: f64, expected: f64, tol: f64, what: &str) -> Result<(), String> {
    if (value - expected).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{what}: {value} vs expected {expected} (tol {tol})"))
    }
}

/// Aligned amplification: seeded mode 3·sinh²g + 1 photons, partner sinh²g;
/// the orthogonally seeded state swaps the roles.
fn mean_photon_laws() -> Result<(), String> {
    let gp = GainParams::new(1.0).map_err(lib)?;
    let spec = CutoffSpec::default();
    let mean = 1.0f64.sinh().powi(2);
    let aligned = macro_single(SingleSeed::Aligned, 0.0, &gp, spec).map_err(lib)?;
    close(
        aligned.mean_photon(Mode::First).map_err(lib)?,
        3.0 * mean + 1.0,
        1e-6,
        "seeded-mode mean",
    )?;
    close(
        aligned.mean_photon(Mode::Second).map_err(lib)?,
        mean,
        1e-6,
        "partner-mode mean",
    )?;
    let orthogonal = macro_single(SingleSeed::Orthogonal, 0.0, &gp, spec).map_err(lib)?;
    close(
        orthogonal.mean_photon(Mode::First).map_err(lib)?,
        mean,
        1e-6,
        "analysis-mode mean of the orthogonal state",
    )
}

fn two_photon_orthogonality() -> Result<(), String> {
    let gp = GainParams::new(1.2).map_err(lib)?;
    let spec = CutoffSpec::default();
    let plus = macro_two_photon(TwoPhotonKind::TwoAligned, &gp, spec).map_err(lib)?;
    let minus = macro_two_photon(TwoPhotonKind::TwoOrthogonal, &gp, spec).map_err(lib)?;
    let overlap = plus.inner_product(&minus).map_err(lib)?.norm();
    if overlap < 1e-10 {
        Ok(())
    } else {
        Err(format!("overlap {overlap:.3e} exceeds 1e-10"))
    }
}

fn conditional_at(phi_b: f64) -> Result<qiopa::fock::PhotonDistribution, String> {
    let gp = GainParams::new(1.0).map_err(lib)?;
    let joint = micro_macro_joint(phi_b, &gp, CutoffSpec::default()).map_err(lib)?;
    let (_, bob) =
        condition_on_alice(&joint, phi_b, AliceOutcome::SingleAligned, phi_b).map_err(lib)?;
    Ok(bob.number_distribution())
}

fn abstention_monotone() -> Result<(), String> {
    let dist = conditional_at(0.0)?;
    let mut last = -1.0;
    for k in [0.0, 1.0, 2.0, 4.0, 8.0] {
        let chain = DetectorChain {
            eta: 0.5,
            threshold_k: k,
            ..DetectorChain::default()
        };
        let of = of_probabilities(&dist, &chain).map_err(lib)?;
        let p_inc = 1.0 - of.conclusive();
        if p_inc + 1e-12 < last {
            return Err(format!("abstention fell from {last} to {p_inc} at k = {k}"));
        }
        last = p_inc;
    }
    Ok(())
}

/// The filter outcome triple must not depend on which equatorial basis the
/// matched measurement is carried out in.
fn phase_covariance() -> Result<(), String> {
    let chain = DetectorChain {
        eta: 0.6,
        threshold_k: 2.0,
        ..DetectorChain::default()
    };
    let reference = of_probabilities(&conditional_at(0.0)?, &chain).map_err(lib)?;
    for phi in [FRAC_PI_2, PI, 3.0 * FRAC_PI_2] {
        let probed = of_probabilities(&conditional_at(phi)?, &chain).map_err(lib)?;
        close(probed.p_plus, reference.p_plus, 1e-6, "plus probability")?;
        close(probed.p_minus, reference.p_minus, 1e-6, "minus probability")?;
    }
    Ok(())
}

fn quick_fringe_cfg(seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig {
        g: 0.8,
        n_trials: 20_000,
        rng_seed: seed,
        exact: true,
        ..ExperimentConfig::default()
    };
    cfg.chain = DetectorChain {
        eta: 1.0,
        threshold_k: 0.0,
        discriminator: Discriminator::Threshold,
        ..DetectorChain::default()
    };
    cfg.phi_scan = (0..=8).map(|i| i as f64 * PI / 4.0).collect();
    cfg
}

fn sampling_consistency(seed: u64) -> Result<(), String> {
    let exact_cfg = quick_fringe_cfg(seed);
    let exact = run_micro_macro_fringe(&exact_cfg, 3).map_err(lib)?;
    let mut sampled_cfg = exact_cfg.clone();
    sampled_cfg.exact = false;
    let sampled = run_micro_macro_fringe(&sampled_cfg, 3).map_err(lib)?;
    let n = sampled_cfg.n_trials as f64;
    for (e, s) in exact.points.iter().zip(&sampled.points) {
        let conclusive = e.probs.conclusive();
        let counts = s.counts.as_ref().expect("sampled scan carries counts");
        for (i, &count) in counts.cells().iter().enumerate() {
            let p = e.probs.cell(i) / conclusive;
            let sigma = (n * p * (1.0 - p)).sqrt().max(1.0);
            let dev = (count as f64 - n * p).abs();
            if dev > 4.0 * sigma {
                return Err(format!(
                    "cell {i} at phi = {:.3}: {count} vs {:.1} ± {:.1}",
                    e.phi,
                    n * p,
                    sigma
                ));
            }
        }
    }
    Ok(())
}

fn worker_determinism(seed: u64) -> Result<(), String> {
    let mut cfg = quick_fringe_cfg(seed);
    cfg.exact = false;
    cfg.n_trials = 2_000;
    cfg.workers = 1;
    let single = run_micro_macro_fringe(&cfg, 3).map_err(lib)?;
    cfg.workers = 8;
    let parallel = run_micro_macro_fringe(&cfg, 3).map_err(lib)?;
    if single == parallel {
        Ok(())
    } else {
        Err("scan differs between 1 and 8 workers".into())
    }
}

fn thermal_law(seed: u64) -> Result<(), String> {
    let cfg = ExperimentConfig {
        n_trials: 100_000,
        rng_seed: seed,
        ..ExperimentConfig::default()
    };
    let mean = 2.0;
    let of = run_of_characterization(&cfg, mean, 10).map_err(lib)?;
    let n = cfg.n_trials as f64;
    for point in &of.points {
        let p = thermal_threshold_prob(mean, point.k).map_err(lib)?;
        let sigma = (n * p * (1.0 - p)).sqrt().max(1.0);
        let dev = (point.counts as f64 - n * p).abs();
        if dev > 4.0 * sigma {
            return Err(format!(
                "k = {}: {} vs {:.1} ± {:.1}",
                point.k,
                point.counts,
                n * p,
                sigma
            ));
        }
    }
    Ok(())
}
