//! Vacuum/electronic noise calibration bookkeeping.

use crate::SecurityError;
use serde::{Deserialize, Serialize};

/// Outcome of one vacuum-noise calibration: the two switch-configuration
/// variances and the derived shot-noise normalization factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    /// Raw variance with the LO switch on and the signal switch off
    /// (vacuum + electronic noise).
    pub vac_var: f64,
    /// Raw variance with both switches off (electronic noise only).
    pub elec_var: f64,
    /// Normalization factor u = vac_var − elec_var; raw units per SNU.
    pub snu_factor: f64,
}

impl CalibrationRecord {
    /// Electronic noise in shot noise units, detector-referred.
    pub fn v_el_snu(&self) -> f64 {
        self.elec_var / self.snu_factor
    }

    /// Normalizes a raw variance into SNU.
    pub fn to_snu(&self, raw_var: f64) -> f64 {
        raw_var / self.snu_factor
    }
}

/// Derives the shot-noise normalization from the two calibration variances.
pub fn calibrate_snu(var_on: f64, var_off: f64) -> Result<CalibrationRecord, SecurityError> {
    if !(var_on.is_finite() && var_off.is_finite()) || var_off < 0.0 || var_on <= var_off {
        return Err(SecurityError::CalibrationInvalid { var_on, var_off });
    }
    Ok(CalibrationRecord {
        vac_var: var_on,
        elec_var: var_off,
        snu_factor: var_on - var_off,
    })
}
