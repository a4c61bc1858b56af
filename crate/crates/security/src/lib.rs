//! Parameter estimation and asymptotic security analysis.
//!
//! Takes paired Alice/Bob symbol records plus the receiver calibration,
//! estimates transmittance and excess noise in shot noise units, partitions
//! them into trusted and untrusted components, and evaluates the collective-
//! attack secret key rate from the mutual information and the Holevo bound.
//!
//! Noise referral convention, used everywhere in this crate:
//! * `v_el` is detector-referred: the per-quadrature electronic variance of
//!   the normalized heterodyne samples (`var_off / u`).
//! * `xi`, `xi_t`, `xi_u` are referred to the channel output (receiver
//!   input) plane. The detector-plane residual measured by the estimator is
//!   rescaled once, by `2/eta_t`, when the estimate is assembled; no other
//!   implicit conversions exist.

pub mod calibration;
pub mod estimate;
pub mod gaussian;
pub mod skr;

pub use calibration::{calibrate_snu, CalibrationRecord};
pub use estimate::{estimate_channel, ChannelEstimate, EstimatorConfig};
pub use gaussian::{holevo_bound, mutual_information, symplectic_eigenvalues, von_neumann_g};
pub use skr::{secret_key_rate, SecurityResult};

/// Untrusted excess noise floor substituted for negative estimates before
/// key-rate evaluation, in SNU (2 mSNU).
pub const XI_U_FLOOR_SNU: f64 = 0.002;

/// Default optical transmittance of the receiver.
pub const DEFAULT_ETA_T: f64 = 0.33;

#[derive(Debug, thiserror::Error)]
pub enum SecurityError {
    #[error("calibration invalid: var_on {var_on} must exceed var_off {var_off} >= 0")]
    CalibrationInvalid { var_on: f64, var_off: f64 },
    #[error("symbol records differ in length: {alice} vs {bob}")]
    LengthMismatch { alice: usize, bob: usize },
    #[error("need at least {need} symbol pairs, got {got}")]
    TooFewSymbols { need: usize, got: usize },
    #[error("covariance matrix is not a valid physical state: {0}")]
    NonPhysical(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
