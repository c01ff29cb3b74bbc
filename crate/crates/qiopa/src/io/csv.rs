//! CSV renderings of scan and grid records.
//!
//! Every renderer returns the complete file body as a `String`: header line,
//! one row per record, `\n` separators, and a trailing newline. Numbers are
//! formatted with Rust's `Display` for `f64`/integers — the shortest string
//! that parses back to the identical value — so files are byte-stable across
//! platforms and locales.

use crate::experiments::{FringeScan, OfCharacterization};
use crate::fock::PhotonDistribution;
use std::fmt::Write as _;

/// Render a coincidence fringe: one row per scanned trigger phase.
///
/// Columns: the phase, the coincidences in Bob's two filter ports, and the
/// background-origin share of those coincidences. Sampled scans write the
/// recorded counts; exact scans write the per-recorded-trial probabilities in
/// the same columns.
pub fn fringe_csv(scan: &FringeScan) -> String {
    let mut out = String::from("phi,counts_plus,counts_minus,counts_background\n");
    for point in &scan.points {
        match &point.counts {
            Some(t) => {
                let _ = writeln!(out, "{},{},{},{}", point.phi, t.n_pp, t.n_pm, t.n_background);
            }
            None => {
                let bg: f64 = point.probs.p_background.iter().sum();
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    point.phi,
                    point.probs.cell(0),
                    point.probs.cell(1),
                    bg
                );
            }
        }
    }
    out
}

/// Render a joint photon-number grid P(m, n), row-major over the full
/// truncated square (zero cells included, so the file is a complete
/// heatmap-ready lattice).
pub fn grid_csv(dist: &PhotonDistribution) -> String {
    let dim = dist.cutoff() + 1;
    let mut out = String::with_capacity(8 * dim * dim);
    out.push_str("m,n,p\n");
    for m in 0..dim {
        for n in 0..dim {
            let _ = writeln!(out, "{},{},{}", m, n, dist.prob(m, n));
        }
    }
    out
}

/// Render a threshold sweep: trials whose detected photon number reached
/// each threshold value.
pub fn threshold_csv(of: &OfCharacterization) -> String {
    let mut out = String::from("k,counts\n");
    for point in &of.points {
        let _ = writeln!(out, "{},{}", point.k, point.counts);
    }
    out
}
