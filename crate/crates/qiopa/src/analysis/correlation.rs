//! Correlation functions, the CHSH parameter, and the separability bound.

use crate::error::{Error, Result};
use crate::experiments::CountsTable;
use serde::{Deserialize, Serialize};

/// The CHSH combination of four correlations with its propagated error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshResult {
    /// The four (E, σ_E) inputs in setting order (a,b), (a′,b), (a,b′), (a′,b′).
    pub e: [(f64, f64); 4],
    /// S = E(a,b) + E(a′,b) + E(a,b′) − E(a′,b′).
    pub s: f64,
    /// Quadrature-propagated standard error of S.
    pub sigma_s: f64,
}

/// Correlation E = [N(+,+) + N(−,−) − N(+,−) − N(−,+)] / N_conclusive of a
/// counts table, with the multinomial delta-method error
/// σ_E = √((1 − E²)/N_conclusive).
pub fn correlation_e(t: &CountsTable) -> Result<(f64, f64)> {
    let total = t.conclusive_total();
    if total == 0 {
        return Err(Error::ZeroProbability {
            context: "correlation of a table with no conclusive events".into(),
        });
    }
    let total = total as f64;
    let e = (t.n_pp as f64 + t.n_mm as f64 - t.n_pm as f64 - t.n_mp as f64) / total;
    let sigma = ((1.0 - e * e).max(0.0) / total).sqrt();
    Ok((e, sigma))
}

/// CHSH parameter from four correlations ordered (a,b), (a′,b), (a,b′),
/// (a′,b′): S = E₁ + E₂ + E₃ − E₄, with σ_S in quadrature. Local realistic
/// models obey |S| ≤ 2; quantum mechanics reaches 2√2.
pub fn chsh_s(e: &[(f64, f64); 4]) -> Result<ChshResult> {
    for &(value, sigma) in e {
        if !value.is_finite() || value.abs() > 1.0 + 1e-9 {
            return Err(Error::InvalidParameter {
                name: "E",
                value,
                constraint: "correlations must be finite with |E| ≤ 1",
            });
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::InvalidParameter {
                name: "sigma_E",
                value: sigma,
                constraint: "standard errors must be finite and ≥ 0",
            });
        }
    }
    let s = e[0].0 + e[1].0 + e[2].0 - e[3].0;
    let sigma_s = e.iter().map(|&(_, sg)| sg * sg).sum::<f64>().sqrt();
    Ok(ChshResult { e: *e, s, sigma_s })
}

/// Separability test: S = V₁ + V₂ + V₃ with the bound S ≤ 1 for separable
/// states. Returns (S, violated). Supply V₁ = 0 when it was not measured.
pub fn separability_s(v1: f64, v2: f64, v3: f64) -> Result<(f64, bool)> {
    for (name, v) in [("V1", v1), ("V2", v2), ("V3", v3)] {
        if !v.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&v) {
            return Err(Error::InvalidParameter {
                name: match name {
                    "V1" => "V1",
                    "V2" => "V2",
                    _ => "V3",
                },
                value: v,
                constraint: "visibilities must lie in [0, 1]",
            });
        }
    }
    let s = v1 + v2 + v3;
    Ok((s, s > 1.0))
}
