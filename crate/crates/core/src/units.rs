//! Shot-noise-unit and transmittance newtypes plus dB conversions.
//!
//! All noise figures in the workspace are variances in shot noise units
//! (vacuum variance = 1). Values are kept output-referred; any referral to
//! another plane is an explicit, documented conversion at the call site.

use crate::CoreError;
use serde::{Deserialize, Serialize};

/// A variance expressed in shot noise units (vacuum = 1).
///
/// Most SNU quantities are variance-like and non-negative, but statistical
/// noise estimates (e.g. the untrusted excess noise before clamping) may be
/// negative, so the inner value is only required to be finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Snu(f64);

impl Snu {
    /// Wraps a finite value that may be negative (signed noise estimates).
    pub fn new(value: f64) -> Result<Self, CoreError> {
        if !value.is_finite() {
            return Err(CoreError::NonFinite(value));
        }
        Ok(Snu(value))
    }

    /// Wraps a finite, non-negative variance.
    pub fn variance(value: f64) -> Result<Self, CoreError> {
        let v = Self::new(value)?;
        if value < 0.0 {
            return Err(CoreError::NegativeVariance(value));
        }
        Ok(v)
    }

    pub fn from_msnu(msnu: f64) -> Result<Self, CoreError> {
        Self::new(msnu * 1e-3)
    }

    pub const ZERO: Snu = Snu(0.0);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn msnu(self) -> f64 {
        self.0 * 1e3
    }

    /// Clamps to at least `floor`, keeping the raw value available elsewhere.
    pub fn clamp_min(self, floor: f64) -> Snu {
        Snu(self.0.max(floor))
    }
}

/// A power transmittance in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transmittance(f64);

impl Transmittance {
    pub fn new(value: f64) -> Result<Self, CoreError> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(CoreError::TransmittanceRange(value));
        }
        Ok(Transmittance(value))
    }

    pub const UNITY: Transmittance = Transmittance(1.0);

    pub fn value(self) -> f64 {
        self.0
    }

    /// Field (amplitude) scaling factor, sqrt of the power transmittance.
    pub fn amplitude(self) -> f64 {
        self.0.sqrt()
    }
}

/// Converts a fiber loss in dB to a power transmittance, 10^(−loss/10).
pub fn db_to_transmittance(loss_db: f64) -> Result<Transmittance, CoreError> {
    if !loss_db.is_finite() {
        return Err(CoreError::NonFinite(loss_db));
    }
    if loss_db < 0.0 {
        return Err(CoreError::NegativeLoss(loss_db));
    }
    Transmittance::new(10f64.powf(-loss_db / 10.0))
}

/// Converts a power transmittance back to loss in dB, −10·log10(t).
pub fn transmittance_to_db(t: Transmittance) -> Result<f64, CoreError> {
    if t.value() <= 0.0 {
        return Err(CoreError::TransmittanceRange(t.value()));
    }
    Ok(-10.0 * t.value().log10())
}
