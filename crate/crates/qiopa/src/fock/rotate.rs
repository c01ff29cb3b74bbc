//! Change of polarization basis for two-mode Fock states.
//!
//! A basis change is a 2×2 unitary `R` on the creation operators,
//! `s† = R t†` (source modes in terms of target modes). Each total photon
//! number `N` carries an `(N+1)`-dimensional irreducible block; the induced
//! amplitude map is evaluated by splitting `R = Rz(α)·Ry(β)·Rz(γ)` and
//! applying the three factors blockwise:
//!
//! - `Rz` factors act as pure phases `e^{-i t (2m−N)/2}` on the occupation
//!   index `m` of the first mode;
//! - the `Ry(β)` block is `exp(βG)` with `G` real antisymmetric tridiagonal,
//!   computed through one real symmetric eigendecomposition per block (an
//!   orthogonal — hence numerically benign — transform at any block size).
//!
//! Because substituting operators composes contravariantly, the induced block
//! maps multiply in *reverse* order: `D(R) = D(Rz(γ))·D(Ry(β))·D(Rz(α))`.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use num_complex::Complex64;

use super::state::TwoModeState;
use super::ModeBasis;

/// Creation-operator rows of a basis: row `j` gives mode `j+1` of `basis`
/// in terms of the pole modes `(a_H†, a_V†)`.
pub(crate) fn mode_matrix(basis: ModeBasis) -> Matrix2<Complex64> {
    match basis {
        ModeBasis::Poles => Matrix2::identity(),
        ModeBasis::Equatorial { phi } => {
            let half = phi / 2.0;
            let w = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -half);
            let z = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, half);
            Matrix2::new(w, z, -w, z)
        }
    }
}

/// Euler angles (α, β, γ) with `R = Rz(α)·Ry(β)·Rz(γ)`,
/// `Rz(t) = diag(e^{-it/2}, e^{it/2})` and
/// `Ry(β) = [[cos β/2, −sin β/2], [sin β/2, cos β/2]]`.
///
/// `r` must have unit determinant (enforced by the callers here), so
/// `r₁₁ = e^{-i(α+γ)/2} cos β/2` and `r₂₁ = e^{i(α−γ)/2} sin β/2` determine
/// the angles directly.
fn zyz_angles(r: &Matrix2<Complex64>) -> (f64, f64, f64) {
    let r11 = r[(0, 0)];
    let r21 = r[(1, 0)];
    let beta = 2.0 * r21.norm().atan2(r11.norm());
    const EDGE: f64 = 1e-12;
    if r21.norm() < EDGE {
        // β ≈ 0: only α+γ matters; put it all in α.
        (-2.0 * r11.arg(), beta, 0.0)
    } else if r11.norm() < EDGE {
        // β ≈ π: only α−γ matters.
        (2.0 * r21.arg(), beta, 0.0)
    } else {
        let sum = -2.0 * r11.arg();
        let diff = 2.0 * r21.arg();
        ((sum + diff) / 2.0, beta, (sum - diff) / 2.0)
    }
}

/// Multiply a block in place by `D(Rz(t)) = diag(e^{-i t (2m−N)/2})`.
fn apply_rz(block: &mut [Complex64], t: f64) {
    if t == 0.0 {
        return;
    }
    let n = block.len() - 1;
    for (m, c) in block.iter_mut().enumerate() {
        let angle = -t * (2.0 * m as f64 - n as f64) / 2.0;
        *c *= Complex64::from_polar(1.0, angle);
    }
}

/// Multiply a block in place by `D(Ry(β)) = exp(βG) = T·exp(iβS)·T†`, where
/// `T = diag((−i)^k)` and `S` is the real symmetric tridiagonal matrix with
/// `S[j][j+1] = ½√((j+1)(N−j))`.
fn apply_ry(block: &mut [Complex64], beta: f64) {
    if beta.abs() < 1e-15 || block.len() == 1 {
        return;
    }
    let dim = block.len();
    let n = dim - 1;
    let mut s = DMatrix::<f64>::zeros(dim, dim);
    for j in 0..n {
        let v = 0.5 * (((j + 1) * (n - j)) as f64).sqrt();
        s[(j, j + 1)] = v;
        s[(j + 1, j)] = v;
    }
    let eig = SymmetricEigen::new(s);
    let q = &eig.eigenvectors;

    // x = T†·block, with T† = diag(i^k).
    let i_pow = |k: usize| match k % 4 {
        0 => Complex64::ONE,
        1 => Complex64::I,
        2 => -Complex64::ONE,
        _ => -Complex64::I,
    };
    let x = DVector::from_iterator(dim, block.iter().enumerate().map(|(k, c)| i_pow(k) * c));
    // y = Qᵀ·x, then phases e^{iβλ}, then back: block = T·Q·y.
    let mut y = DVector::from_element(dim, Complex64::ZERO);
    for j in 0..dim {
        let mut acc = Complex64::ZERO;
        for k in 0..dim {
            acc += Complex64::from(q[(k, j)]) * x[k];
        }
        y[j] = acc * Complex64::from_polar(1.0, beta * eig.eigenvalues[j]);
    }
    for (k, c) in block.iter_mut().enumerate() {
        let mut acc = Complex64::ZERO;
        for j in 0..dim {
            acc += Complex64::from(q[(k, j)]) * y[j];
        }
        *c = i_pow(k).conj() * acc;
    }
}

/// Express a state in another polarization basis.
///
/// The output grid is sized to the largest occupied total photon number
/// (a block can concentrate all its photons in one mode), and the truncation
/// deficit of the input is carried over unchanged — the map is unitary, so no
/// probability is created or destroyed.
pub fn rotate_mode(state: &TwoModeState, target: ModeBasis) -> TwoModeState {
    if state.basis() == target {
        return state.clone();
    }
    let r = mode_matrix(state.basis()) * mode_matrix(target).adjoint();
    debug_assert!(
        (r.determinant() - Complex64::ONE).norm() < 1e-12,
        "basis matrices must compose to a unit-determinant map"
    );
    let (alpha, beta, gamma) = zyz_angles(&r);

    let n_max = state.max_total_photons();
    let out_dim = n_max + 1;
    let mut out = vec![Complex64::ZERO; out_dim * out_dim];
    for total in 0..=n_max {
        let mut block: Vec<Complex64> = (0..=total)
            .map(|m| state.amp(m, total - m))
            .collect();
        if block.iter().all(|c| *c == Complex64::ZERO) {
            continue;
        }
        apply_rz(&mut block, alpha);
        apply_ry(&mut block, beta);
        apply_rz(&mut block, gamma);
        for (m, c) in block.into_iter().enumerate() {
            out[m * out_dim + (total - m)] = c;
        }
    }
    TwoModeState::raw(target, n_max, out, state.tail_deficit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!(
            (a - b).norm() < tol,
            "expected {b}, got {a} (|Δ| = {})",
            (a - b).norm()
        );
    }

    #[test]
    fn equatorial_single_photon_closed_form() {
        // δ = φ_src − φ_tgt; |1_src⟩ → cos(δ/2)|1_tgt⟩ + i sin(δ/2)|1_tgt⊥⟩.
        let src = ModeBasis::equatorial(1.3);
        let tgt = ModeBasis::equatorial(0.4);
        let delta: f64 = 1.3 - 0.4;
        let (c, s) = ((delta / 2.0).cos(), (delta / 2.0).sin());
        let rot = rotate_mode(&TwoModeState::fock_ket(src, 4, 1, 0), tgt);
        assert_close(rot.amp(1, 0), Complex64::new(c, 0.0), 1e-14);
        assert_close(rot.amp(0, 1), Complex64::new(0.0, s), 1e-14);
        // Orthogonal input: |1_src⊥⟩ → i sin(δ/2)|1_tgt⟩ + cos(δ/2)|1_tgt⊥⟩.
        let rot = rotate_mode(&TwoModeState::fock_ket(src, 4, 0, 1), tgt);
        assert_close(rot.amp(1, 0), Complex64::new(0.0, s), 1e-14);
        assert_close(rot.amp(0, 1), Complex64::new(c, 0.0), 1e-14);
    }

    #[test]
    fn equatorial_two_photon_closed_form() {
        let src = ModeBasis::equatorial(2.0);
        let tgt = ModeBasis::equatorial(0.75);
        let delta: f64 = 2.0 - 0.75;
        let (c, s) = ((delta / 2.0).cos(), (delta / 2.0).sin());
        let rot = rotate_mode(&TwoModeState::fock_ket(src, 3, 2, 0), tgt);
        assert_close(rot.amp(2, 0), Complex64::new(c * c, 0.0), 1e-13);
        let root2 = std::f64::consts::SQRT_2;
        assert_close(rot.amp(1, 1), Complex64::new(0.0, root2 * c * s), 1e-13);
        assert_close(rot.amp(0, 2), Complex64::new(-s * s, 0.0), 1e-13);

        let rot = rotate_mode(&TwoModeState::fock_ket(src, 3, 1, 1), tgt);
        assert_close(rot.amp(1, 1), Complex64::new(c * c - s * s, 0.0), 1e-13);
        assert_close(rot.amp(2, 0), Complex64::new(0.0, root2 * c * s), 1e-13);
        assert_close(rot.amp(0, 2), Complex64::new(0.0, root2 * c * s), 1e-13);
    }

    #[test]
    fn zero_phase_basis_relates_to_poles_symmetrically() {
        // At φ = 0 the first equatorial mode is (a_H† + a_V†)/√2.
        let rot = rotate_mode(
            &TwoModeState::fock_ket(ModeBasis::equatorial(0.0), 2, 1, 0),
            ModeBasis::poles(),
        );
        let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert_close(rot.amp(1, 0), w, 1e-15);
        assert_close(rot.amp(0, 1), w, 1e-15);
    }

    #[test]
    fn rotation_is_unitary_and_invertible() {
        let basis = ModeBasis::poles();
        let mut amps = vec![Complex64::ZERO; 36];
        // A fixed, non-symmetric test vector spread over several blocks.
        let entries = [
            (0usize, 0usize, Complex64::new(0.3, 0.1)),
            (1, 2, Complex64::new(-0.2, 0.4)),
            (3, 0, Complex64::new(0.5, -0.1)),
            (4, 4, Complex64::new(0.1, 0.6)),
            (2, 5, Complex64::new(-0.15, -0.2)),
        ];
        let norm: f64 = entries.iter().map(|(_, _, c)| c.norm_sqr()).sum();
        for (m, n, c) in entries {
            amps[m * 6 + n] = c / norm.sqrt();
        }
        let state = TwoModeState::from_amplitudes(basis, 5, amps, 0.0).unwrap();

        let mid = rotate_mode(&state, ModeBasis::equatorial(0.9));
        assert_abs_diff_eq!(mid.norm_sqr(), 1.0, epsilon = 1e-12);
        let back = rotate_mode(&mid, basis);
        assert_abs_diff_eq!(back.fidelity(&state).unwrap(), 1.0, epsilon = 1e-12);
        for (m, n, c) in back.iter_nonzero() {
            assert_close(c, state.amp(m, n), 1e-12);
        }
    }

    #[test]
    fn rotations_compose() {
        let a = ModeBasis::equatorial(0.3);
        let b = ModeBasis::right_left();
        let c = ModeBasis::poles();
        let state = TwoModeState::fock_ket(a, 3, 2, 1);
        let two_step = rotate_mode(&rotate_mode(&state, b), c);
        let one_step = rotate_mode(&state, c);
        for m in 0..=3 {
            for n in 0..=3 {
                assert_close(two_step.amp(m, n), one_step.amp(m, n), 1e-12);
            }
        }
    }

    #[test]
    fn same_basis_is_identity() {
        let basis = ModeBasis::equatorial(1.1);
        let state = TwoModeState::fock_ket(basis, 7, 3, 2);
        let rot = rotate_mode(&state, basis);
        assert_eq!(rot.amp(3, 2), Complex64::ONE);
        assert_eq!(rot.cutoff(), 7);
    }
}
