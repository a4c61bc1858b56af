//! Reconciliation outcome accounting.

use crate::ReconError;
use serde::{Deserialize, Serialize};

/// Aggregate result of one reconciliation pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconReport {
    pub frames_attempted: usize,
    pub frames_decoded: usize,
    pub fer: f64,
    /// Efficiency achieved at the operating SNR.
    pub beta: f64,
    /// Residual bit errors across verified frames; zero by construction
    /// after hash verification.
    pub residual_ber: f64,
}

impl ReconReport {
    pub fn new(
        frames_attempted: usize,
        frames_decoded: usize,
        beta: f64,
        residual_errors: usize,
        verified_bits: usize,
    ) -> Result<Self, ReconError> {
        if frames_decoded > frames_attempted {
            return Err(ReconError::InvalidConfig(
                "decoded more frames than attempted".into(),
            ));
        }
        if !(0.0 < beta && beta <= 1.0) {
            return Err(ReconError::InvalidConfig(format!(
                "beta must be in (0, 1], got {beta}"
            )));
        }
        let fer = if frames_attempted == 0 {
            0.0
        } else {
            (frames_attempted - frames_decoded) as f64 / frames_attempted as f64
        };
        let residual_ber = if verified_bits == 0 {
            0.0
        } else {
            residual_errors as f64 / verified_bits as f64
        };
        Ok(ReconReport {
            frames_attempted,
            frames_decoded,
            fer,
            beta,
            residual_ber,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
