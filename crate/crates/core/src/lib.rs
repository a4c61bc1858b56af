//! Shared domain types for the CV-QKD link simulator: shot-noise-unit and
//! transmittance newtypes, fiber link profiles with polarization drift
//! models, and the seeded random streams every other crate draws from.

pub mod link;
pub mod par;
pub mod rng;
pub mod units;

pub use link::{LinkProfile, SopModel};
pub use rng::RngStream;
pub use units::{db_to_transmittance, transmittance_to_db, Snu, Transmittance};

/// Errors shared across the core domain types.
#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("loss must be non-negative, got {0} dB")]
    NegativeLoss(f64),
    #[error("transmittance must lie in (0, 1], got {0}")]
    TransmittanceRange(f64),
    #[error("value must be finite, got {0}")]
    NonFinite(f64),
    #[error("variance-like quantity must be non-negative, got {0}")]
    NegativeVariance(f64),
    #[error("unknown link label {0:?}")]
    UnknownLink(String),
    #[error("invalid link profile {label:?}: {reason}")]
    InvalidProfile { label: String, reason: String },
    #[error("link file parse error: {0}")]
    LinkFile(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
