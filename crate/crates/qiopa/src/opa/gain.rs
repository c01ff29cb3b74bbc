use crate::error::{Error, Result};

/// Amplifier gain and the derived quantities every formula reuses.
///
/// For nonlinear gain `g ≥ 0`:
/// - `C = cosh g` (normalization),
/// - `Γ = tanh g` (amplification ratio, `0 ≤ Γ < 1`),
/// - `m̄ = sinh²g` (mean photon number per spontaneously amplified mode,
///   equal to `C² − 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GainParams {
    g: f64,
}

impl GainParams {
    /// Validate and wrap a gain value.
    pub fn new(g: f64) -> Result<Self> {
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidGain { g });
        }
        Ok(Self { g })
    }

    /// The nonlinear gain g.
    pub fn g(&self) -> f64 {
        self.g
    }

    /// C = cosh g.
    pub fn c(&self) -> f64 {
        self.g.cosh()
    }

    /// Γ = tanh g.
    pub fn gamma(&self) -> f64 {
        self.g.tanh()
    }

    /// S = sinh g.
    pub fn s(&self) -> f64 {
        self.g.sinh()
    }

    /// m̄ = sinh²g, the per-mode mean photon number of amplified vacuum.
    pub fn mbar(&self) -> f64 {
        self.g.sinh().powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities_satisfy_identities() {
        for g in [0.0, 0.3, 1.0, 1.5, 4.4] {
            let gp = GainParams::new(g).unwrap();
            assert!(gp.c() >= 1.0);
            assert!((0.0..1.0).contains(&gp.gamma()));
            assert!((gp.mbar() - (gp.c().powi(2) - 1.0)).abs() < 1e-12 * gp.c().powi(2));
        }
    }

    #[test]
    fn rejects_bad_gain() {
        assert!(GainParams::new(-0.1).is_err());
        assert!(GainParams::new(f64::INFINITY).is_err());
        assert!(GainParams::new(f64::NAN).is_err());
    }
}
