//! Binomial loss on photon-number statistics.
//!
//! A beam splitter of transmission η followed by photon counting turns an
//! input number distribution P(n) into Σₙ P(n)·Bin(n′ | n, η): each photon
//! survives independently. Crucially this map sees only the *diagonal* of the
//! density operator in the number basis — amplitude coherences never reach
//! the detected counts — so loss can be applied to distributions directly.
//! That is what makes gain-4.4 pipelines tractable: the quantum state lives
//! in closed form, and only classical probability vectors are transported.

use crate::error::{Error, Result};
use crate::fock::math::ln_factorial;
use crate::fock::PhotonDistribution;

/// Relative weight below which binomial terms are dropped when sweeping away
/// from the mode of the kernel; total neglected mass per source is ≲ 1e-15.
const SWEEP_FLOOR: f64 = 1e-18;

/// Thin a 1-D photon-number weight vector by a binomial loss of efficiency η.
///
/// Returns the thinned vector of length `out_len` and the (signed) weight
/// that landed at or beyond `out_len`. The map is linear, so it applies to
/// signed interference vectors just as well as to probability vectors.
///
/// Each source term spreads over a binomial kernel evaluated by a stable
/// multiplicative recurrence outward from its mode; cost is
/// O(len · kernel width), not O(len²).
pub(crate) fn thin_vector(input: &[f64], eta: f64, out_len: usize) -> (Vec<f64>, f64) {
    assert!((0.0..=1.0).contains(&eta), "thin_vector needs η in [0,1]");
    let mut out = vec![0.0; out_len];
    let mut overflow = 0.0;
    if eta == 1.0 {
        for (n, &x) in input.iter().enumerate() {
            if n < out_len {
                out[n] += x;
            } else {
                overflow += x;
            }
        }
        return (out, overflow);
    }
    if eta == 0.0 {
        if out_len > 0 {
            out[0] = input.iter().sum();
        } else {
            overflow = input.iter().sum();
        }
        return (out, overflow);
    }
    let ln_eta = eta.ln();
    let ln_keep = (-eta).ln_1p();
    for (n, &x) in input.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        if n == 0 {
            if out_len > 0 {
                out[0] += x;
            } else {
                overflow += x;
            }
            continue;
        }
        // Mode of Bin(· | n, η), clamped into the support.
        let mode = ((eta * (n + 1) as f64).floor() as usize).min(n);
        let ln_mode = ln_factorial(n as u64)
            - ln_factorial(mode as u64)
            - ln_factorial((n - mode) as u64)
            + mode as f64 * ln_eta
            + (n - mode) as f64 * ln_keep;
        let w_mode = ln_mode.exp();
        let floor = w_mode * SWEEP_FLOOR;
        let ratio_up = eta / (1.0 - eta);
        // Upward sweep from the mode (k = mode, mode+1, …).
        let mut w = w_mode;
        let mut k = mode;
        loop {
            let contribution = x * w;
            if k < out_len {
                out[k] += contribution;
            } else {
                overflow += contribution;
            }
            if k == n {
                break;
            }
            w *= (n - k) as f64 / (k + 1) as f64 * ratio_up;
            k += 1;
            if w < floor {
                break;
            }
        }
        // Downward sweep (k = mode−1, mode−2, …).
        let mut w = w_mode;
        let mut k = mode;
        while k > 0 {
            w *= k as f64 / (n - k + 1) as f64 / ratio_up;
            k -= 1;
            if w < floor {
                break;
            }
            let contribution = x * w;
            if k < out_len {
                out[k] += contribution;
            } else {
                overflow += contribution;
            }
        }
    }
    (out, overflow)
}

/// Independent binomial loss of efficiency η on both modes of a joint
/// photon-number distribution.
///
/// P′(m′,n′) = Σ_{m≥m′, n≥n′} P(m,n) · Bin(m′|m,η) · Bin(n′|n,η).
/// The grid size is preserved (thinning never raises a count), so the tail
/// deficit is exactly the input deficit.
pub fn apply_loss(d: &PhotonDistribution, eta: f64) -> Result<PhotonDistribution> {
    if !eta.is_finite() || !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidEfficiency { eta });
    }
    if eta == 1.0 {
        return Ok(d.clone());
    }
    let dim = d.cutoff() + 1;
    let grid = d.grid();
    let mut thinned = vec![0.0; dim * dim];
    // Second mode: thin each row in place.
    for m in 0..dim {
        let (row, over) = thin_vector(&grid[m * dim..(m + 1) * dim], eta, dim);
        debug_assert!(over == 0.0);
        thinned[m * dim..(m + 1) * dim].copy_from_slice(&row);
    }
    // First mode: thin each column.
    let mut column = vec![0.0; dim];
    for n in 0..dim {
        for m in 0..dim {
            column[m] = thinned[m * dim + n];
        }
        let (col, over) = thin_vector(&column, eta, dim);
        debug_assert!(over == 0.0);
        for m in 0..dim {
            thinned[m * dim + n] = col[m];
        }
    }
    Ok(PhotonDistribution::from_parts(
        d.basis(),
        d.cutoff(),
        thinned,
        d.deficit(),
    ))
}

/// Geometric (thermal) photon-number vector of the given mean, truncated
/// where the tail drops below `eps_tail`. Returns (probabilities, tail mass).
pub(crate) fn thermal_vector(mean: f64, eps_tail: f64) -> (Vec<f64>, f64) {
    assert!(mean >= 0.0 && mean.is_finite());
    if mean == 0.0 {
        return (vec![1.0], 0.0);
    }
    let q = mean / (1.0 + mean);
    // Tail mass beyond n is q^(n+1); choose the cutoff from that closed form.
    let cutoff = (eps_tail.ln() / q.ln()).ceil().max(8.0) as usize;
    let mut probs = Vec::with_capacity(cutoff + 1);
    let mut p = 1.0 - q;
    for _ in 0..=cutoff {
        probs.push(p);
        p *= q;
    }
    let deficit = ((cutoff as f64 + 1.0) * q.ln()).exp();
    (probs, deficit)
}
