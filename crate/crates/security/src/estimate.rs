//! Covariance-based channel parameter estimation with trusted/untrusted
//! partitioning.

use crate::calibration::CalibrationRecord;
use crate::{SecurityError, XI_U_FLOOR_SNU};
use cvqkd_core::{Snu, Transmittance};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Receiver-side constants the estimator needs.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorConfig {
    /// Optical transmittance of the receiver (splitters, CWDM, detector
    /// quantum efficiency lumped together).
    pub eta_t: f64,
    /// Receiver excess noise assigned to the trusted side on top of the
    /// electronic noise, detector-referred SNU per quadrature. Zero keeps
    /// every unexplained residual on the untrusted side.
    pub trusted_excess_det: f64,
    /// Minimum number of symbol pairs accepted.
    pub min_symbols: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            eta_t: crate::DEFAULT_ETA_T,
            trusted_excess_det: 0.0,
            min_symbols: 10_000,
        }
    }
}

/// Channel estimate with trusted/untrusted partition.
///
/// `xi`, `xi_t` and `xi_u_raw` are referred to the channel output plane;
/// `v_el` is detector-referred. See the crate docs for the convention.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelEstimate {
    /// Realized modulation variance (from Alice's record), SNU.
    pub v_mod: Snu,
    /// Total transmittance Alice→detector (η_t · η_u).
    pub eta: f64,
    pub eta_t: Transmittance,
    /// Electronic noise from calibration, detector-referred SNU.
    pub v_el: Snu,
    /// Total excess noise (electronic + receiver + channel), channel-output
    /// referred SNU.
    pub xi: Snu,
    /// Trusted part of `xi` (electronic + assigned receiver excess).
    pub xi_t: Snu,
    /// Untrusted part, `xi − xi_t`, signed as estimated.
    pub xi_u_raw: Snu,
    pub n_symbols: usize,
    /// Standard error of the untrusted transmittance estimate.
    pub eta_u_se: f64,
    /// Standard error of the untrusted noise estimate.
    pub xi_u_se: f64,
}

impl ChannelEstimate {
    /// Untrusted transmittance η/η_t, clamped into [0, 1].
    pub fn eta_u(&self) -> Transmittance {
        Transmittance::new((self.eta / self.eta_t.value()).clamp(0.0, 1.0)).unwrap()
    }

    /// Raw untrusted transmittance before the physicality clamp.
    pub fn eta_u_raw(&self) -> f64 {
        self.eta / self.eta_t.value()
    }

    /// Untrusted noise for key-rate use: clamped to ≥ 2 mSNU. The raw
    /// signed value stays available in `xi_u_raw`.
    pub fn xi_u_for_key(&self) -> Snu {
        self.xi_u_raw.clamp_min(XI_U_FLOOR_SNU)
    }

    /// Trusted noise as seen at the detector per quadrature,
    /// η_t·ξ_t/2 = v_el + assigned receiver excess.
    pub fn trusted_noise_det(&self) -> f64 {
        self.eta_t.value() * self.xi_t.value() / 2.0
    }

    /// Per-quadrature SNR of the heterodyne data implied by the estimate.
    pub fn snr_quadrature(&self) -> f64 {
        let signal = self.eta * self.v_mod.value() / 2.0;
        let noise = 1.0 + self.eta_t.value() * self.xi.value() / 2.0;
        signal / noise
    }

    /// Builds an estimate directly from ground-truth parameters (used by
    /// sweeps and tests; no statistics involved).
    pub fn from_parameters(
        v_mod: f64,
        eta_u: f64,
        xi_u: f64,
        eta_t: f64,
        v_el: f64,
        n_symbols: usize,
    ) -> Self {
        let xi_t = 2.0 * v_el / eta_t;
        ChannelEstimate {
            v_mod: Snu::new(v_mod).unwrap(),
            eta: eta_t * eta_u,
            eta_t: Transmittance::new(eta_t).unwrap(),
            v_el: Snu::new(v_el).unwrap(),
            xi: Snu::new(xi_u + xi_t).unwrap(),
            xi_t: Snu::new(xi_t).unwrap(),
            xi_u_raw: Snu::new(xi_u).unwrap(),
            n_symbols,
            eta_u_se: 0.0,
            xi_u_se: 0.0,
        }
    }
}

struct QuadratureStats {
    var_a: f64,
    var_b: f64,
    cov: f64,
}

fn quadrature_stats(alice: &[Complex64], bob: &[Complex64], re: bool) -> QuadratureStats {
    let n = alice.len() as f64;
    let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (a, b) in alice.iter().zip(bob) {
        let (x, y) = if re { (a.re, b.re) } else { (a.im, b.im) };
        sa += x;
        sb += y;
        saa += x * x;
        sbb += y * y;
        sab += x * y;
    }
    let (ma, mb) = (sa / n, sb / n);
    QuadratureStats {
        var_a: saa / n - ma * ma,
        var_b: sbb / n - mb * mb,
        cov: sab / n - ma * mb,
    }
}

/// Estimates transmittance and excess noise from paired symbol records.
///
/// `alice` holds the transmitted symbols in SNU scaling (E|x|² = v_mod);
/// `bob` holds the recovered symbols normalized by the calibration factor.
/// Per quadrature the model is y = √(η/2)·x + n, so η is estimated from the
/// squared regression slope (the heterodyne half accounted), the detector-
/// plane residual is var(B) − cov²/var(A) − 1 − v_el, and the residual is
/// referred to the channel output by the single 2/η_t rescale.
pub fn estimate_channel(
    alice: &[Complex64],
    bob: &[Complex64],
    cal: &CalibrationRecord,
    cfg: &EstimatorConfig,
) -> Result<ChannelEstimate, SecurityError> {
    if alice.len() != bob.len() {
        return Err(SecurityError::LengthMismatch {
            alice: alice.len(),
            bob: bob.len(),
        });
    }
    if alice.len() < cfg.min_symbols {
        return Err(SecurityError::TooFewSymbols {
            need: cfg.min_symbols,
            got: alice.len(),
        });
    }
    if !(0.0 < cfg.eta_t && cfg.eta_t <= 1.0) {
        return Err(SecurityError::InvalidParameter(format!(
            "eta_t = {} out of (0, 1]",
            cfg.eta_t
        )));
    }
    if cal.snu_factor <= 0.0 {
        return Err(SecurityError::CalibrationInvalid {
            var_on: cal.vac_var,
            var_off: cal.elec_var,
        });
    }

    let n = alice.len() as f64;
    let v_el = cal.v_el_snu();
    let mut eta_acc = 0.0;
    let mut resid_acc = 0.0;
    let mut v_mod_acc = 0.0;
    let mut eta_var_acc = 0.0;
    let mut resid_var_acc = 0.0;
    for re in [true, false] {
        let s = quadrature_stats(alice, bob, re);
        if s.var_a <= 0.0 {
            return Err(SecurityError::InvalidParameter(
                "alice record has zero variance".to_string(),
            ));
        }
        let slope = s.cov / s.var_a;
        let eta_q = 2.0 * slope * slope;
        let signal = s.cov * s.cov / s.var_a;
        let resid_q = s.var_b - signal - 1.0 - v_el;
        eta_acc += eta_q;
        resid_acc += resid_q;
        v_mod_acc += 2.0 * s.var_a;
        // Delta-method variances for Gaussian records.
        eta_var_acc += 4.0 * eta_q * eta_q / n * (s.var_a * s.var_b / (s.cov * s.cov) - 1.0);
        let noise = (s.var_b - signal).max(0.0);
        resid_var_acc += 2.0 * noise * noise / n;
    }
    let eta = (eta_acc / 2.0).max(0.0);
    let resid_det = resid_acc / 2.0;
    let v_mod = v_mod_acc / 2.0;
    // Independent quadratures halve the averaged variances.
    let eta_se = (eta_var_acc / 4.0).sqrt();
    let resid_se = (resid_var_acc / 4.0).sqrt();

    let to_channel = 2.0 / cfg.eta_t;
    let xi_t = to_channel * (v_el + cfg.trusted_excess_det);
    let xi_u = to_channel * (resid_det - cfg.trusted_excess_det);
    let xi = xi_u + xi_t;

    Ok(ChannelEstimate {
        v_mod: Snu::new(v_mod).map_err(|_| nonfinite("v_mod"))?,
        eta,
        eta_t: Transmittance::new(cfg.eta_t).unwrap(),
        v_el: Snu::new(v_el).map_err(|_| nonfinite("v_el"))?,
        xi: Snu::new(xi).map_err(|_| nonfinite("xi"))?,
        xi_t: Snu::new(xi_t).map_err(|_| nonfinite("xi_t"))?,
        xi_u_raw: Snu::new(xi_u).map_err(|_| nonfinite("xi_u"))?,
        n_symbols: alice.len(),
        eta_u_se: eta_se / cfg.eta_t,
        xi_u_se: to_channel * resid_se,
    })
}

fn nonfinite(what: &str) -> SecurityError {
    SecurityError::InvalidParameter(format!("{what} evaluated non-finite"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::calibrate_snu;
    use cvqkd_core::RngStream;

    /// Symbol-level channel: y = √(η_t·t_u/2)·x + n with the measured noise
    /// model 1 + v_el + η_t·ξ_u/2 per quadrature.
    fn simulate(
        rng: &mut RngStream,
        n: usize,
        v_mod: f64,
        t_u: f64,
        xi_u: f64,
        eta_t: f64,
        v_el: f64,
    ) -> (Vec<Complex64>, Vec<Complex64>) {
        let amp = (eta_t * t_u / 2.0).sqrt();
        let sigma_q = (v_mod / 2.0).sqrt();
        let noise_q = (1.0 + v_el + eta_t * xi_u / 2.0).sqrt();
        let mut alice = Vec::with_capacity(n);
        let mut bob = Vec::with_capacity(n);
        for _ in 0..n {
            let x = Complex64::new(rng.normal() * sigma_q, rng.normal() * sigma_q);
            let nz = Complex64::new(rng.normal() * noise_q, rng.normal() * noise_q);
            alice.push(x);
            bob.push(amp * x + nz);
        }
        (alice, bob)
    }

    #[test]
    fn lossless_channel_recovers_unity() {
        let mut rng = RngStream::new(11);
        let cal = calibrate_snu(1.1, 0.1).unwrap();
        let cfg = EstimatorConfig::default();
        let (a, b) = simulate(&mut rng, 400_000, 4.0, 1.0, 0.0, cfg.eta_t, 0.1);
        let est = estimate_channel(&a, &b, &cal, &cfg).unwrap();
        assert!(
            (est.eta_u_raw() - 1.0).abs() < 3.0 * est.eta_u_se,
            "eta_u {} ± {}",
            est.eta_u_raw(),
            est.eta_u_se
        );
        assert!(
            est.xi_u_raw.value().abs() < 3.0 * est.xi_u_se,
            "xi_u {} ± {}",
            est.xi_u_raw.value(),
            est.xi_u_se
        );
    }

    #[test]
    fn injected_parameters_recovered() {
        let mut rng = RngStream::new(23);
        let cal = calibrate_snu(2.2, 0.2).unwrap();
        let cfg = EstimatorConfig::default();
        let (t_u, xi_u) = (0.389, 0.01);
        let (a, b) = simulate(&mut rng, 1_000_000, 4.0, t_u, xi_u, cfg.eta_t, 0.1);
        let est = estimate_channel(&a, &b, &cal, &cfg).unwrap();
        assert!((est.eta_u_raw() - t_u).abs() < 3.0 * est.eta_u_se);
        assert!((est.xi_u_raw.value() - xi_u).abs() < 3.0 * est.xi_u_se);
        assert!((est.v_mod.value() - 4.0).abs() < 0.02);
    }

    #[test]
    fn negative_estimate_clamps_for_key_use_only() {
        let est = ChannelEstimate::from_parameters(4.0, 0.4, -0.001, 0.33, 0.1, 100_000);
        assert_eq!(est.xi_u_raw.value(), -0.001);
        assert_eq!(est.xi_u_for_key().value(), XI_U_FLOOR_SNU);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let cal = calibrate_snu(1.1, 0.1).unwrap();
        let a = vec![Complex64::new(1.0, 0.0); 10_000];
        let b = vec![Complex64::new(1.0, 0.0); 10_001];
        assert!(matches!(
            estimate_channel(&a, &b, &cal, &EstimatorConfig::default()),
            Err(SecurityError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn standard_errors_shrink_as_sqrt_n() {
        // Empirical spread over seeds should match the reported SE within a
        // factor 1.5 at each n, and scale like 1/√n.
        let cal = calibrate_snu(1.1, 0.1).unwrap();
        let cfg = EstimatorConfig::default();
        let mut ses = Vec::new();
        for (ni, n) in [10_000usize, 100_000, 1_000_000].into_iter().enumerate() {
            let trials = 24;
            let mut xi_hats = Vec::new();
            let mut reported = 0.0;
            for t in 0..trials {
                let mut rng = RngStream::new(1000 + (ni * trials + t) as u64);
                let (a, b) = simulate(&mut rng, n, 4.0, 0.389, 0.01, cfg.eta_t, 0.1);
                let est = estimate_channel(&a, &b, &cal, &cfg).unwrap();
                xi_hats.push(est.xi_u_raw.value());
                reported = est.xi_u_se;
            }
            let mean = xi_hats.iter().sum::<f64>() / trials as f64;
            let emp =
                (xi_hats.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64)
                    .sqrt();
            let ratio = emp / reported;
            assert!(
                (1.0 / 1.5..=1.5).contains(&ratio),
                "n={n}: empirical {emp:.2e} vs reported {reported:.2e}"
            );
            ses.push(reported);
        }
        assert!((ses[0] / ses[1]) / 10f64.sqrt() > 1.0 / 1.5);
        assert!((ses[1] / ses[2]) / 10f64.sqrt() > 1.0 / 1.5);
    }
}
