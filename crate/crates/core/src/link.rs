//! Fiber link profiles: length, loss, polarization-drift model and excess
//! noise, with the built-in presets L0–L4 and a plain-text profile file.

use crate::{db_to_transmittance, CoreError, Snu, Transmittance};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// Default fiber attenuation used when a profile gives only a length.
pub const DEFAULT_FIBER_DB_PER_KM: f64 = 0.2;

/// How the channel's state of polarization evolves over a round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SopModel {
    /// Frozen SOP.
    Static,
    /// Slow angular diffusion, underground-fiber-like.
    SlowWalk { diffusion_rad2_per_s: f64 },
    /// Fast diffusion with Poisson-arriving burst rotations, aerial-fiber-like.
    FastFluct {
        diffusion_rad2_per_s: f64,
        burst_rate_hz: f64,
    },
}

impl SopModel {
    pub fn validate(&self) -> Result<(), String> {
        match *self {
            SopModel::Static => Ok(()),
            SopModel::SlowWalk {
                diffusion_rad2_per_s,
            } => {
                if diffusion_rad2_per_s > 0.0 {
                    Ok(())
                } else {
                    Err("slow-walk diffusion must be > 0".into())
                }
            }
            SopModel::FastFluct {
                diffusion_rad2_per_s,
                burst_rate_hz,
            } => {
                if diffusion_rad2_per_s > 0.0 && burst_rate_hz > 0.0 {
                    Ok(())
                } else {
                    Err("fast-fluct diffusion and burst rate must be > 0".into())
                }
            }
        }
    }
}

/// Description of one quantum channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkProfile {
    pub label: String,
    pub length_km: f64,
    pub loss_db: f64,
    pub sop_model: SopModel,
    /// Untrusted excess noise injected by the channel, output-referred SNU.
    pub excess_noise: Snu,
    /// Noise contribution of co-propagating classical traffic; zero by
    /// default (the wavelength separation makes it unobservable), kept as a
    /// knob for what-if studies.
    pub classical_crosstalk: Snu,
}

impl LinkProfile {
    pub fn validate(&self) -> Result<(), CoreError> {
        let fail = |reason: &str| {
            Err(CoreError::InvalidProfile {
                label: self.label.clone(),
                reason: reason.to_string(),
            })
        };
        if !self.loss_db.is_finite() || self.loss_db < 0.0 {
            return fail("loss_db must be finite and >= 0");
        }
        if !self.length_km.is_finite() || self.length_km < 0.0 {
            return fail("length_km must be finite and >= 0");
        }
        if let Err(reason) = self.sop_model.validate() {
            return fail(&reason);
        }
        if self.excess_noise.value() < 0.0 {
            return fail("excess_noise must be >= 0");
        }
        if self.classical_crosstalk.value() < 0.0 {
            return fail("classical_crosstalk must be >= 0");
        }
        Ok(())
    }

    pub fn transmittance(&self) -> Transmittance {
        db_to_transmittance(self.loss_db).expect("validated profile")
    }
}

// Default drift constants. Chosen so the relative-SNR histogram widths of a
// slow-walk link stay well below those of a fast-fluct link; tunable via the
// profile file.
const SLOW_WALK_LAB: SopModel = SopModel::SlowWalk {
    diffusion_rad2_per_s: 3e-5,
};
const SLOW_WALK: SopModel = SopModel::SlowWalk {
    diffusion_rad2_per_s: 1e-4,
};
const FAST_FLUCT: SopModel = SopModel::FastFluct {
    diffusion_rad2_per_s: 1e-1,
    burst_rate_hz: 10.0,
};

/// The built-in link presets.
///
/// L1–L4 are deployed-fiber profiles (lengths and losses as characterized on
/// the real links); L0 is a 10 km lab spool whose loss is not separately
/// characterized and is computed from [`DEFAULT_FIBER_DB_PER_KM`].
pub fn load_link_presets() -> Vec<LinkProfile> {
    let mk = |label: &str, length_km: f64, loss_db: f64, sop_model: SopModel, msnu: f64| {
        LinkProfile {
            label: label.to_string(),
            length_km,
            loss_db,
            sop_model,
            excess_noise: Snu::from_msnu(msnu).unwrap(),
            classical_crosstalk: Snu::ZERO,
        }
    };
    vec![
        mk(
            "L0",
            10.0,
            10.0 * DEFAULT_FIBER_DB_PER_KM,
            SLOW_WALK_LAB,
            5.0,
        ),
        mk("L1", 0.55, 5.5, SLOW_WALK, 10.0),
        mk("L2", 13.2, 4.1, FAST_FLUCT, 10.0),
        mk("L3", 15.3, 6.7, FAST_FLUCT, 20.0),
        mk("L4", 25.9, 8.9, FAST_FLUCT, 30.0),
    ]
}

/// Looks up a preset by label.
pub fn preset(label: &str) -> Result<LinkProfile, CoreError> {
    load_link_presets()
        .into_iter()
        .find(|p| p.label == label)
        .ok_or_else(|| CoreError::UnknownLink(label.to_string()))
}

#[derive(Debug, Deserialize)]
struct LinkFileEntry {
    length_km: Option<f64>,
    loss_db: Option<f64>,
    sop_model: String,
    excess_noise_msnu: f64,
    #[serde(default)]
    crosstalk_msnu: f64,
    diffusion_rad2_per_s: Option<f64>,
    burst_rate_hz: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct LinkFile {
    links: BTreeMap<String, LinkFileEntry>,
}

/// Loads link profiles from a plain-text (TOML) file.
///
/// ```toml
/// [links.L2]
/// length_km = 13.2
/// loss_db = 4.1
/// sop_model = "fast-fluct"
/// excess_noise_msnu = 10.0
/// ```
///
/// `loss_db` may be omitted when `length_km` is given; the default
/// 0.2 dB/km attenuation is then applied.
pub fn load_link_file(path: &Path) -> Result<Vec<LinkProfile>, CoreError> {
    let text = std::fs::read_to_string(path)?;
    parse_link_file(&text)
}

pub fn parse_link_file(text: &str) -> Result<Vec<LinkProfile>, CoreError> {
    let file: LinkFile = toml::from_str(text).map_err(|e| CoreError::LinkFile(e.to_string()))?;
    let mut out = Vec::new();
    for (label, entry) in file.links {
        let length_km = entry.length_km.unwrap_or(0.0);
        let loss_db = match entry.loss_db {
            Some(db) => db,
            None => {
                let Some(km) = entry.length_km else {
                    return Err(CoreError::LinkFile(format!(
                        "link {label:?} needs length_km or loss_db"
                    )));
                };
                km * DEFAULT_FIBER_DB_PER_KM
            }
        };
        let sop_model = match entry.sop_model.as_str() {
            "static" => SopModel::Static,
            "slow-walk" => SopModel::SlowWalk {
                diffusion_rad2_per_s: entry.diffusion_rad2_per_s.unwrap_or(1e-4),
            },
            "fast-fluct" => SopModel::FastFluct {
                diffusion_rad2_per_s: entry.diffusion_rad2_per_s.unwrap_or(1e-1),
                burst_rate_hz: entry.burst_rate_hz.unwrap_or(10.0),
            },
            other => {
                return Err(CoreError::LinkFile(format!(
                    "link {label:?}: unknown sop_model {other:?}"
                )))
            }
        };
        let profile = LinkProfile {
            label,
            length_km,
            loss_db,
            sop_model,
            excess_noise: Snu::from_msnu(entry.excess_noise_msnu)
                .map_err(|e| CoreError::LinkFile(e.to_string()))?,
            classical_crosstalk: Snu::from_msnu(entry.crosstalk_msnu)
                .map_err(|e| CoreError::LinkFile(e.to_string()))?,
        };
        profile.validate()?;
        out.push(profile);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_link_table() {
        let l2 = preset("L2").unwrap();
        assert_eq!((l2.length_km, l2.loss_db), (13.2, 4.1));
        assert!(matches!(l2.sop_model, SopModel::FastFluct { .. }));

        let l1 = preset("L1").unwrap();
        assert_eq!((l1.length_km, l1.loss_db), (0.55, 5.5));
        assert!(matches!(l1.sop_model, SopModel::SlowWalk { .. }));

        let l4 = preset("L4").unwrap();
        assert_eq!((l4.length_km, l4.loss_db), (25.9, 8.9));
        assert_eq!(l4.excess_noise.msnu(), 30.0);
    }

    #[test]
    fn unknown_label_is_an_error() {
        assert!(matches!(preset("L5"), Err(CoreError::UnknownLink(_))));
    }

    #[test]
    fn l0_loss_from_length() {
        let l0 = preset("L0").unwrap();
        assert_eq!(l0.loss_db, 2.0);
        assert!(matches!(
            l0.sop_model,
            SopModel::SlowWalk {
                diffusion_rad2_per_s
            } if diffusion_rad2_per_s < 1e-4
        ));
    }

    #[test]
    fn all_presets_validate() {
        for p in load_link_presets() {
            p.validate().unwrap();
        }
    }

    #[test]
    fn link_file_round_trip() {
        let text = r#"
[links.SYN1]
length_km = 8.0
sop_model = "slow-walk"
excess_noise_msnu = 5.0

[links.SYN2]
length_km = 3.0
loss_db = 2.5
sop_model = "fast-fluct"
excess_noise_msnu = 15.0
crosstalk_msnu = 1.0
burst_rate_hz = 20.0
"#;
        let links = parse_link_file(text).unwrap();
        assert_eq!(links.len(), 2);
        assert_eq!(links[0].label, "SYN1");
        assert!((links[0].loss_db - 1.6).abs() < 1e-12);
        assert_eq!(links[1].loss_db, 2.5);
        assert_eq!(links[1].classical_crosstalk.msnu(), 1.0);
        assert!(matches!(
            links[1].sop_model,
            SopModel::FastFluct { burst_rate_hz, .. } if burst_rate_hz == 20.0
        ));
    }

    #[test]
    fn bad_sop_model_rejected() {
        let text = "[links.X]\nlength_km = 1.0\nsop_model = \"wobble\"\nexcess_noise_msnu = 0.0\n";
        assert!(parse_link_file(text).is_err());
    }
}
