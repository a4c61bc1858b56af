//! Gaussian-state machinery: symplectic eigenvalues, von Neumann entropy,
//! the EPR-equivalent covariance model of the link, and the Holevo bound
//! for collective attacks with a trusted receiver.
//!
//! Covariance matrices use the mode-interleaved quadrature ordering
//! (x1, p1, x2, p2, ...) with vacuum variance 1, and the symplectic form
//! Ω = ⊕ [[0, 1], [−1, 0]].

use crate::estimate::ChannelEstimate;
use crate::SecurityError;
use nalgebra::DMatrix;

/// Physicality tolerance on symplectic eigenvalues.
const NU_TOL: f64 = 1e-9;

/// Builds the symplectic form for `n` modes.
fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Symplectic eigenvalues of a 2n×2n covariance matrix.
///
/// The eigenvalues of Ω·σ come in pairs ±iν; this returns the n distinct
/// moduli, ascending. Computed through symmetric eigendecompositions only:
/// with S = σ^½ the matrix −(S Ω S)² is symmetric positive semi-definite
/// with each ν² appearing twice.
///
/// Errors on non-symmetric or non-positive-definite input, and flags
/// non-physical states (any ν < 1 − 1e−9).
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>, SecurityError> {
    let dim = cov.nrows();
    if dim == 0 || dim % 2 != 0 || cov.ncols() != dim {
        return Err(SecurityError::NonPhysical(format!(
            "covariance must be square with even dimension, got {}x{}",
            dim,
            cov.ncols()
        )));
    }
    let scale = cov.amax().max(1.0);
    for i in 0..dim {
        for j in 0..i {
            if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-9 * scale {
                return Err(SecurityError::NonPhysical("not symmetric".into()));
            }
        }
    }
    // Symmetrize before factoring so roundoff in the input cannot leak in.
    let sym = (cov + cov.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(SecurityError::NonPhysical(
            "not positive definite".to_string(),
        ));
    }
    let sqrt_vals = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_vals * eig.eigenvectors.transpose();
    let m = &root * symplectic_form(dim / 2) * &root;
    // m is antisymmetric; −m² = mᵀm is symmetric PSD with doubled ν².
    let nsq = (&m * &m) * -1.0;
    let mut nu_sq: Vec<f64> = ((&nsq + nsq.transpose()) * 0.5)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0))
        .collect();
    nu_sq.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let nus: Vec<f64> = nu_sq.iter().step_by(2).map(|&l| l.sqrt()).collect();
    if let Some(&low) = nus.first() {
        if low < 1.0 - NU_TOL {
            return Err(SecurityError::NonPhysical(format!(
                "symplectic eigenvalue {low} below vacuum limit"
            )));
        }
    }
    Ok(nus)
}

/// Entropy kernel g(x) = (x+1)·log₂(x+1) − x·log₂(x), evaluated at
/// x = (ν−1)/2; the von Neumann entropy of a thermal mode with symplectic
/// eigenvalue ν.
pub fn von_neumann_g(nu: f64) -> f64 {
    let x = (nu - 1.0) / 2.0;
    if x <= 1e-12 {
        return 0.0;
    }
    (x + 1.0) * (x + 1.0).log2() - x * x.log2()
}

fn entropy_of(cov: &DMatrix<f64>) -> Result<f64, SecurityError> {
    Ok(symplectic_eigenvalues(cov)?
        .into_iter()
        .map(von_neumann_g)
        .sum())
}

/// EPR-equivalent two-mode covariance of (A, B₁) after the untrusted
/// channel: transmittance `eta_u`, excess noise `xi_u` at the channel
/// output, modulation variance `v_mod` (so the EPR variance is V = v_mod+1).
pub fn channel_state(v_mod: f64, eta_u: f64, xi_u: f64) -> DMatrix<f64> {
    let v = v_mod + 1.0;
    let b = eta_u * v_mod + 1.0 + xi_u;
    let c = (eta_u * (v * v - 1.0)).sqrt();
    let mut g = DMatrix::zeros(4, 4);
    g[(0, 0)] = v;
    g[(1, 1)] = v;
    g[(2, 2)] = b;
    g[(3, 3)] = b;
    g[(0, 2)] = c;
    g[(2, 0)] = c;
    g[(1, 3)] = -c;
    g[(3, 1)] = -c;
    g
}

/// Covariance of the remaining modes after a heterodyne measurement of one
/// mode: Γ_R − C (Γ_B + I)⁻¹ Cᵀ, with `measured` the index of the measured
/// mode in the interleaved layout.
fn heterodyne_condition(cov: &DMatrix<f64>, measured: usize) -> DMatrix<f64> {
    let dim = cov.nrows();
    let rest: Vec<usize> = (0..dim)
        .filter(|&i| i != 2 * measured && i != 2 * measured + 1)
        .collect();
    let meas = [2 * measured, 2 * measured + 1];
    let gr = cov.select_rows(rest.iter()).select_columns(rest.iter());
    let gb = cov.select_rows(meas.iter()).select_columns(meas.iter());
    let c = cov.select_rows(rest.iter()).select_columns(meas.iter());
    let gb_het = gb + DMatrix::identity(2, 2);
    let inv = gb_het.try_inverse().expect("2x2 heterodyne block");
    &gr - &c * inv * c.transpose()
}

/// Full four-mode covariance (A, B₁, F₀, G) before the receiver
/// beamsplitter, with the trusted noise source (F₀, G) an EPR pair of
/// variance `v_noise`.
fn four_mode_state(v_mod: f64, eta_u: f64, xi_u: f64, v_noise: f64) -> DMatrix<f64> {
    let ab = channel_state(v_mod, eta_u, xi_u);
    let cn = (v_noise * v_noise - 1.0).max(0.0).sqrt();
    let mut g = DMatrix::zeros(8, 8);
    g.view_mut((0, 0), (4, 4)).copy_from(&ab);
    for k in [4, 5, 6, 7] {
        g[(k, k)] = v_noise;
    }
    g[(4, 6)] = cn;
    g[(6, 4)] = cn;
    g[(5, 7)] = -cn;
    g[(7, 5)] = -cn;
    g
}

/// Symplectic beamsplitter of transmittance `t` acting on modes (i, j).
fn beamsplitter(n_modes: usize, i: usize, j: usize, t: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    let (c, r) = (t.sqrt(), (1.0 - t).sqrt());
    for q in 0..2 {
        s[(2 * i + q, 2 * i + q)] = c;
        s[(2 * i + q, 2 * j + q)] = r;
        s[(2 * j + q, 2 * i + q)] = -r;
        s[(2 * j + q, 2 * j + q)] = c;
    }
    s
}

/// Holevo information χ_BE between Eve and Bob's heterodyne outcome, in
/// bits per symbol, asymptotic collective-attack regime.
///
/// Eve purifies only the untrusted channel (`eta_u`, clamped `xi_u`); the
/// receiver is a trusted beamsplitter of transmittance `eta_t` whose second
/// input is fed by an EPR source sized to reproduce the detector-referred
/// trusted noise. χ_BE = S(A,B₁) − S(A,F,G | b).
pub fn holevo_bound(est: &ChannelEstimate) -> Result<f64, SecurityError> {
    holevo_bound_parts(
        est.v_mod.value(),
        est.eta_u().value(),
        est.xi_u_for_key().value(),
        est.eta_t.value(),
        est.trusted_noise_det(),
    )
}

/// As [`holevo_bound`], from bare parameters. `trusted_det` is the trusted
/// noise seen at the detector per quadrature (v_el plus any assigned
/// receiver excess), i.e. `eta_t`·ξ_t/2 in channel-output referral.
pub fn holevo_bound_parts(
    v_mod: f64,
    eta_u: f64,
    xi_u: f64,
    eta_t: f64,
    trusted_det: f64,
) -> Result<f64, SecurityError> {
    if !(v_mod > 0.0) {
        return Err(SecurityError::InvalidParameter(format!(
            "v_mod must be > 0, got {v_mod}"
        )));
    }
    if !(0.0 < eta_u && eta_u <= 1.0) || !(0.0 < eta_t && eta_t <= 1.0) {
        return Err(SecurityError::InvalidParameter(format!(
            "transmittances out of range: eta_u={eta_u} eta_t={eta_t}"
        )));
    }
    if xi_u < 0.0 || trusted_det < 0.0 {
        return Err(SecurityError::InvalidParameter(
            "noise terms must be >= 0".to_string(),
        ));
    }
    if eta_t >= 1.0 - 1e-12 && trusted_det > 0.0 {
        return Err(SecurityError::InvalidParameter(
            "trusted noise needs receiver loss (eta_t < 1) to be modeled".to_string(),
        ));
    }

    let s_eve = entropy_of(&channel_state(v_mod, eta_u, xi_u))?;

    let v_noise = if eta_t < 1.0 {
        1.0 + 2.0 * trusted_det / (1.0 - eta_t)
    } else {
        1.0
    };
    let g4 = four_mode_state(v_mod, eta_u, xi_u, v_noise);
    // Mix B₁ (mode 1) with F₀ (mode 2); B₃ replaces mode 1 and is measured.
    let s = beamsplitter(4, 1, 2, eta_t);
    let mixed = &s * g4 * s.transpose();
    let cond = heterodyne_condition(&mixed, 1);
    let s_cond = entropy_of(&cond)?;

    Ok((s_eve - s_cond).max(0.0))
}

/// Mutual information between Alice's symbols and Bob's heterodyne outcome,
/// in bits per symbol. Both quadratures carry data, each at half the log
/// rate, so the two terms sum to one log of the per-quadrature SNR.
pub fn mutual_information(est: &ChannelEstimate) -> f64 {
    (1.0 + est.snr_quadrature()).log2()
}
