use num_complex::Complex64;

use super::gain::GainParams;
use crate::fock::math::ln_factorial;

/// A complex scalar stored as log-magnitude plus phase.
///
/// Amplified-state coefficients involve factorial ratios whose intermediate
/// values overflow `f64` long before the coefficients themselves leave the
/// representable range; assembling them as `ln|z|` keeps every step finite.
/// All coefficients appearing here are real with alternating signs, but the
/// phase is carried as a full angle so a future complex pump phase could not
/// silently corrupt sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogCoeff {
    /// ln|z|; `−∞` encodes an exact zero.
    pub ln_magnitude: f64,
    /// arg z in radians.
    pub phase: f64,
}

impl LogCoeff {
    /// An exact zero.
    pub const ZERO: LogCoeff = LogCoeff {
        ln_magnitude: f64::NEG_INFINITY,
        phase: 0.0,
    };

    /// Build from log-magnitude and phase.
    pub fn new(ln_magnitude: f64, phase: f64) -> Self {
        Self {
            ln_magnitude,
            phase,
        }
    }

    /// Collapse to an ordinary complex number.
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.ln_magnitude.exp(), self.phase)
    }

    /// The signed real value, assuming phase 0 or π.
    #[cfg(test)]
    pub(crate) fn signed_real(&self) -> f64 {
        let sign = if self.phase.cos() < 0.0 { -1.0 } else { 1.0 };
        sign * self.ln_magnitude.exp()
    }
}

/// Pair-emission coefficient `γ_ij = C^{-2} (−Γ/2)^i (Γ/2)^j`.
///
/// These weight the amplified single-photon states: term `(i, j)` places
/// `2i+1` photons in the seeded mode and `2j` in its orthogonal partner (or
/// the transpose for the orthogonally seeded state). Returned in log-domain
/// form; multiply by the occupation-dependent square-root factors to get
/// state amplitudes.
pub fn gamma_coeff(i: usize, j: usize, gp: &GainParams) -> LogCoeff {
    let half_gamma = gp.gamma() / 2.0;
    let ln_mag = if i + j == 0 {
        -2.0 * gp.c().ln()
    } else {
        // (i + j)·ln(Γ/2) is −∞ at g = 0, encoding the exact zero.
        -2.0 * gp.c().ln() + (i + j) as f64 * half_gamma.ln()
    };
    let phase = if i % 2 == 1 { std::f64::consts::PI } else { 0.0 };
    LogCoeff::new(ln_mag, phase)
}

/// `ln(√(n!))`, shared by the amplitude assemblers.
pub(crate) fn ln_sqrt_factorial(n: u64) -> f64 {
    0.5 * ln_factorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_zero_gain() {
        let gp = GainParams::new(0.0).unwrap();
        assert_eq!(gamma_coeff(0, 0, &gp).value(), Complex64::ONE);
        assert_eq!(gamma_coeff(0, 1, &gp).value(), Complex64::ZERO);
        assert_eq!(gamma_coeff(3, 2, &gp).value(), Complex64::ZERO);
    }

    #[test]
    fn gamma_at_unit_gain() {
        let gp = GainParams::new(1.0).unwrap();
        let g01 = gamma_coeff(0, 1, &gp).value();
        assert!((g01.re - 0.15993).abs() < 1e-5, "γ01 = {g01}");
        assert_eq!(g01.im, 0.0);
        let g10 = gamma_coeff(1, 0, &gp).value();
        assert!((g10.re + 0.15993).abs() < 1e-5, "γ10 = {g10}");
        // |γ| depends only on i+j; the sign alternates with i.
        let g23 = gamma_coeff(2, 3, &gp);
        let g32 = gamma_coeff(3, 2, &gp);
        assert!((g23.ln_magnitude - g32.ln_magnitude).abs() < 1e-12);
        assert!(g23.signed_real() > 0.0);
        assert!(g32.signed_real() < 0.0);
    }

    #[test]
    fn log_domain_survives_huge_indices() {
        let gp = GainParams::new(4.4).unwrap();
        let c = gamma_coeff(20_000, 20_000, &gp);
        assert!(c.ln_magnitude.is_finite());
        // Magnitude ~ (Γ/2)^{40000}: far below f64 range, by design.
        assert!(c.ln_magnitude < -27_000.0);
    }
}
