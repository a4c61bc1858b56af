//! Reconciliation efficiency bookkeeping.

use crate::ReconError;

/// β = R / C(snr) with C the AWGN capacity per soft value,
/// C = ½·log₂(1 + snr).
pub fn measure_beta(code_rate: f64, snr: f64) -> Result<f64, ReconError> {
    if !(snr > 0.0) {
        return Err(ReconError::InvalidConfig(format!(
            "snr must be > 0, got {snr}"
        )));
    }
    if !(0.0 < code_rate && code_rate < 1.0) {
        return Err(ReconError::InvalidConfig(format!(
            "code rate must be in (0, 1), got {code_rate}"
        )));
    }
    let capacity = 0.5 * (1.0 + snr).log2();
    let beta = code_rate / capacity;
    if beta > 1.0 {
        return Err(ReconError::InvalidConfig(format!(
            "beta = {beta:.4} > 1: rate {code_rate} exceeds capacity {capacity:.4}"
        )));
    }
    Ok(beta)
}

/// The SNR at which a code of rate `code_rate` runs at efficiency `beta`:
/// solves ½·log₂(1 + s) = R/β.
pub fn operating_snr_for_beta(code_rate: f64, beta: f64) -> Result<f64, ReconError> {
    if !(0.0 < beta && beta <= 1.0) || !(0.0 < code_rate && code_rate < 1.0) {
        return Err(ReconError::InvalidConfig(format!(
            "bad (rate, beta) = ({code_rate}, {beta})"
        )));
    }
    Ok(2f64.powf(2.0 * code_rate / beta) - 1.0)
}
