//! Correlation visibilities from probabilities or fringe scans.

use crate::error::{Error, Result};
use crate::experiments::FringeScan;
use nalgebra::{DMatrix, DVector, Matrix3};
use serde::{Deserialize, Serialize};

/// A visibility estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisibilityResult {
    /// Visibility in [0, 1].
    pub v: f64,
    /// Standard error (0 for exact inputs).
    pub sigma_v: f64,
}

/// Visibility from the four matched-basis outcome probabilities, ordered
/// (P(ψ,Φ), P(ψ⊥,Φ⊥), P(ψ,Φ⊥), P(ψ⊥,Φ)):
/// V = |P(ψ,Φ) + P(ψ⊥,Φ⊥) − P(ψ,Φ⊥) − P(ψ⊥,Φ)|.
///
/// The inputs must be conclusive-renormalized (sum to 1 within 1e-6).
pub fn visibility_probs(
    p_corr_a: f64,
    p_corr_b: f64,
    p_anti_a: f64,
    p_anti_b: f64,
) -> Result<VisibilityResult> {
    let probs = [p_corr_a, p_corr_b, p_anti_a, p_anti_b];
    for p in probs {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidProbabilities {
                context: "visibility inputs must be finite and non-negative".into(),
            });
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidProbabilities {
            context: format!("visibility inputs sum to {total}, expected 1"),
        });
    }
    Ok(VisibilityResult {
        v: (p_corr_a + p_corr_b - p_anti_a - p_anti_b).abs().min(1.0),
        sigma_v: 0.0,
    })
}

/// Visibility of a fringe scan from an unweighted sinusoidal least-squares
/// fit y(φ) = A + B·cos φ + C·sin φ (period fixed to 2π):
/// V = √(B² + C²)/A, with the fit error propagated by the delta method.
///
/// The scan must cover at least one full period and contain at least four
/// points; a non-positive mean level or a rank-deficient system is reported
/// as a degenerate fit.
pub fn visibility_fringe(scan: &FringeScan) -> Result<VisibilityResult> {
    let series = scan.series();
    fit_fringe_series(&series.iter().map(|&(phi, plus, _)| (phi, plus)).collect::<Vec<_>>())
}

/// Sinusoidal fit behind [`visibility_fringe`], usable on any (φ, y) series.
pub(crate) fn fit_fringe_series(points: &[(f64, f64)]) -> Result<VisibilityResult> {
    let n = points.len();
    if n < 4 {
        return Err(Error::DegenerateFit {
            context: format!("need at least 4 fringe points, got {n}"),
        });
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(phi, y) in points {
        if !phi.is_finite() || !y.is_finite() {
            return Err(Error::DegenerateFit {
                context: "fringe points must be finite".into(),
            });
        }
        lo = lo.min(phi);
        hi = hi.max(phi);
    }
    if hi - lo < std::f64::consts::TAU - 1e-9 {
        return Err(Error::DegenerateFit {
            context: format!(
                "scan spans {:.3} rad; a full 2π period is required",
                hi - lo
            ),
        });
    }
    let design = DMatrix::from_fn(n, 3, |r, c| match c {
        0 => 1.0,
        1 => points[r].0.cos(),
        _ => points[r].0.sin(),
    });
    let y = DVector::from_iterator(n, points.iter().map(|&(_, y)| y));
    let normal = design.transpose() * &design;
    let moment = design.transpose() * &y;
    let normal3 = Matrix3::from_fn(|r, c| normal[(r, c)]);
    let inverse = normal3.try_inverse().ok_or_else(|| Error::DegenerateFit {
        context: "normal equations are singular (degenerate phase pattern)".into(),
    })?;
    let coeffs = inverse * nalgebra::Vector3::new(moment[0], moment[1], moment[2]);
    let (a, b, c) = (coeffs[0], coeffs[1], coeffs[2]);
    if !(a > 0.0) {
        return Err(Error::DegenerateFit {
            context: format!("fitted mean level A = {a} must be positive"),
        });
    }
    let amplitude = (b * b + c * c).sqrt();
    // Residual variance (unbiased, 3 fitted parameters).
    let residuals = &design * &coeffs - &y;
    let dof = n.saturating_sub(3);
    let s2 = if dof == 0 {
        0.0
    } else {
        residuals.norm_squared() / dof as f64
    };
    // Delta method on V(A, B, C) = √(B²+C²)/A with covariance s²·(XᵀX)⁻¹.
    let r_safe = amplitude.max(1e-12 * a);
    let grad = nalgebra::Vector3::new(-amplitude / (a * a), b / (a * r_safe), c / (a * r_safe));
    let sigma_v = (s2 * (grad.transpose() * inverse * grad)[(0, 0)]).max(0.0).sqrt();
    Ok(VisibilityResult {
        v: (amplitude / a).min(1.0),
        sigma_v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn series(v: f64, phase: f64, scale: f64) -> Vec<(f64, f64)> {
        (0..=12)
            .map(|i| {
                let phi = i as f64 * PI / 6.0;
                (phi, scale * (1.0 + v * (phi - phase).cos()))
            })
            .collect()
    }

    #[test]
    fn perfect_anticorrelation_has_unit_visibility() {
        let r = visibility_probs(0.5, 0.5, 0.0, 0.0).unwrap();
        assert_eq!(r.v, 1.0);
    }

    #[test]
    fn uniform_probabilities_have_zero_visibility() {
        let r = visibility_probs(0.25, 0.25, 0.25, 0.25).unwrap();
        assert_eq!(r.v, 0.0);
    }

    #[test]
    fn reported_average_visibility_case() {
        // Conclusive-renormalized probabilities with E = 0.540.
        let r = visibility_probs(0.385, 0.385, 0.115, 0.115).unwrap();
        assert!((r.v - 0.540).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_and_unnormalized_inputs() {
        assert!(visibility_probs(-0.1, 0.6, 0.3, 0.2).is_err());
        assert!(visibility_probs(0.3, 0.3, 0.3, 0.3).is_err());
    }

    #[test]
    fn noiseless_cosine_fringe_fits_exactly() {
        let r = fit_fringe_series(&series(1.0, 0.0, 120.0)).unwrap();
        assert!((r.v - 1.0).abs() < 1e-9, "V = {}", r.v);
        assert!(r.sigma_v < 1e-9);
        let r = fit_fringe_series(&series(0.81, 1.2, 300.0)).unwrap();
        assert!((r.v - 0.81).abs() < 1e-9, "V = {}", r.v);
    }

    #[test]
    fn constant_counts_have_zero_visibility() {
        let flat: Vec<(f64, f64)> = (0..=12).map(|i| (i as f64 * PI / 6.0, 55.0)).collect();
        let r = fit_fringe_series(&flat).unwrap();
        assert!(r.v.abs() < 1e-12);
    }

    #[test]
    fn degenerate_scans_are_rejected() {
        // Too few points.
        assert!(fit_fringe_series(&[(0.0, 1.0), (1.0, 2.0), (2.0, 1.0)]).is_err());
        // Less than a full period.
        let short: Vec<(f64, f64)> = (0..8).map(|i| (i as f64 * 0.3, 1.0)).collect();
        assert!(fit_fringe_series(&short).is_err());
        // Zero mean level.
        let zero: Vec<(f64, f64)> = (0..=12).map(|i| (i as f64 * PI / 6.0, 0.0)).collect();
        assert!(fit_fringe_series(&zero).is_err());
    }

    #[test]
    fn noisy_fit_reports_a_plausible_error_bar() {
        let mut pts = series(0.6, 0.4, 200.0);
        // Deterministic pseudo-noise, amplitude ±6.
        for (i, p) in pts.iter_mut().enumerate() {
            p.1 += 6.0 * ((i * 2654435761) % 97) as f64 / 97.0 - 3.0;
        }
        let r = fit_fringe_series(&pts).unwrap();
        assert!((r.v - 0.6).abs() < 0.05, "V = {}", r.v);
        assert!(r.sigma_v > 1e-4 && r.sigma_v < 0.05, "σ_V = {}", r.sigma_v);
    }
}
