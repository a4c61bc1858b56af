//! The asymptotic secret key rate.

use crate::SecurityError;
use serde::{Deserialize, Serialize};

/// Inputs and outcome of one key-rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecurityResult {
    /// Mutual information, bits/symbol.
    pub i_ab: f64,
    /// Holevo bound, bits/symbol.
    pub chi_be: f64,
    /// Reconciliation efficiency in (0, 1].
    pub beta: f64,
    /// Frame error rate in [0, 1].
    pub fer: f64,
    /// Symbol rate, baud.
    pub baud: f64,
    /// Secret key rate, bits/s, floored at zero.
    pub skr_bps: f64,
}

impl SecurityResult {
    /// Secret fraction β·I_AB − χ_BE before rate scaling, not floored.
    pub fn secret_fraction(&self) -> f64 {
        self.beta * self.i_ab - self.chi_be
    }
}

/// Evaluates SKR = B·(1 − FER)·(β·I_AB − χ_BE), floored at zero.
pub fn secret_key_rate(
    baud: f64,
    fer: f64,
    beta: f64,
    i_ab: f64,
    chi_be: f64,
) -> Result<SecurityResult, SecurityError> {
    if !(0.0..=1.0).contains(&fer) {
        return Err(SecurityError::InvalidParameter(format!(
            "FER must be in [0, 1], got {fer}"
        )));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(SecurityError::InvalidParameter(format!(
            "beta must be in (0, 1], got {beta}"
        )));
    }
    if !(baud > 0.0) || chi_be < 0.0 || i_ab < 0.0 {
        return Err(SecurityError::InvalidParameter(
            "baud must be > 0 and information terms >= 0".to_string(),
        ));
    }
    let skr_bps = (baud * (1.0 - fer) * (beta * i_ab - chi_be)).max(0.0);
    Ok(SecurityResult {
        i_ab,
        chi_be,
        beta,
        fer,
        baud,
        skr_bps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_arithmetic_point() {
        // 20e6 · 0.5 · (0.95·0.1 − 0.05148) = 435 200 bits/s.
        let r = secret_key_rate(20e6, 0.5, 0.95, 0.1, 0.05148).unwrap();
        assert!((r.skr_bps - 435_200.0).abs() < 1e-6 * 435_200.0);
    }

    #[test]
    fn null_threshold_is_exact_zero() {
        let r = secret_key_rate(20e6, 0.5, 0.95, 0.1, 0.95 * 0.1).unwrap();
        assert_eq!(r.skr_bps, 0.0);
        assert_eq!(r.secret_fraction(), 0.0);
    }

    #[test]
    fn floored_below_threshold() {
        let r = secret_key_rate(20e6, 0.5, 0.95, 0.1, 0.2).unwrap();
        assert_eq!(r.skr_bps, 0.0);
        assert!(r.secret_fraction() < 0.0);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(secret_key_rate(20e6, 1.1, 0.95, 0.1, 0.0).is_err());
        assert!(secret_key_rate(20e6, 0.5, 0.0, 0.1, 0.0).is_err());
        assert!(secret_key_rate(20e6, 0.5, 1.01, 0.1, 0.0).is_err());
        assert!(secret_key_rate(0.0, 0.5, 0.95, 0.1, 0.0).is_err());
    }
}
