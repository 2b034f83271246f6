//! Scenario files: the JSON configuration consumed by the experiment CLI.
//!
//! A scenario bundles everything one experiment needs — the OFDM grid, a
//! noise model, an uncertainty class for the channel responses, the
//! radar/comm weighting, the power budget, an optional specific response
//! for the non-robust baseline, and an optional sweep axis:
//!
//! ```text
//! {
//!   "ofdm":   { "n_subcarriers": 128, "subcarrier_spacing_hz": 2.5e5,
//!               "guard_interval_s": 1e-6, "n_symbols": 16,
//!               "carrier_frequency_hz": 0.0 },          // default 0
//!   "noise":  { "snr_db": 5.0 }                         // or radar_psd +
//!                                                       // comm_noise_power
//!   "bounds": { "family": "baseline" },                 // or fixed_lower /
//!                                                       // fixed_upper with
//!                                                       // "width", or
//!                                                       // explicit vectors
//!   "w_c": 0.5,                                         // default 0.5
//!   "budget": 1.0,                                      // default 1.0
//!   "specific_response": { "radar": [...], "comm": [...] },   // optional
//!   "sweep":  { "snr_db": [-10, -5, 0, 5, 10, 15, 20] } // exactly one of
//!                                                       // snr_db / width /
//!                                                       // w_c when present
//! }
//! ```
//!
//! Parsing is strict: unknown fields, contradictory sections, and
//! out-of-range values are configuration errors, reported before any
//! computation starts. The resolved [`Scenario`] carries validated domain
//! types only.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ofdm::{
    gaussian_bounds, BoundFamily, NoiseModel, OfdmParams, ResponsePoint, UncertaintyClass,
};

/// A fully resolved experiment configuration.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// The OFDM grid.
    pub params: OfdmParams,
    /// Noise model used unless a sweep overrides the SNR per point.
    pub noise: NoiseModel,
    /// Bound family the class came from; `None` for explicit bounds
    /// (which cannot be regenerated at another width).
    pub family: Option<BoundFamily>,
    /// The response uncertainty class.
    pub class: UncertaintyClass,
    /// Communications weight in `[0, 1]`.
    pub w_comm: f64,
    /// Total transmit power budget.
    pub budget: f64,
    /// Response the non-robust baseline designs for, when given
    /// explicitly; defaults to the class midpoint via
    /// [`Scenario::nonrobust_reference`].
    pub specific_response: Option<ResponsePoint>,
    /// Sweep axis for the sweep subcommands.
    pub sweep: Option<SweepAxis>,
}

/// The quantity a sweep varies, with its (strictly increasing) values.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    /// Vary the SNR knob; the noise model is rebuilt per point.
    SnrDb(Vec<f64>),
    /// Vary the bound-family width; the class is rebuilt per point.
    Width(Vec<f64>),
    /// Vary the communications weight.
    WComm(Vec<f64>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    ofdm: OfdmSection,
    noise: NoiseSection,
    bounds: BoundsSection,
    #[serde(default = "default_w_comm")]
    w_c: f64,
    #[serde(default = "default_budget")]
    budget: f64,
    #[serde(default)]
    specific_response: Option<ResponseSection>,
    #[serde(default)]
    sweep: Option<SweepSection>,
}

fn default_w_comm() -> f64 {
    0.5
}

fn default_budget() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OfdmSection {
    n_subcarriers: usize,
    subcarrier_spacing_hz: f64,
    guard_interval_s: f64,
    n_symbols: usize,
    #[serde(default)]
    carrier_frequency_hz: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseSection {
    #[serde(default)]
    snr_db: Option<f64>,
    #[serde(default)]
    radar_psd: Option<f64>,
    #[serde(default)]
    comm_noise_power: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsSection {
    family: String,
    #[serde(default)]
    width: Option<f64>,
    #[serde(default)]
    radar_lower: Option<Vec<f64>>,
    #[serde(default)]
    radar_upper: Option<Vec<f64>>,
    #[serde(default)]
    comm_lower: Option<Vec<f64>>,
    #[serde(default)]
    comm_upper: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResponseSection {
    radar: Vec<f64>,
    comm: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    #[serde(default)]
    snr_db: Option<Vec<f64>>,
    #[serde(default)]
    width: Option<Vec<f64>>,
    #[serde(default)]
    w_c: Option<Vec<f64>>,
}

impl Scenario {
    /// Parses and validates a scenario from JSON text.
    pub fn from_json_str(text: &str) -> Result<Scenario> {
        let file: ScenarioFile = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("scenario JSON: {e}")))?;
        let params = OfdmParams::new(
            file.ofdm.n_subcarriers,
            file.ofdm.subcarrier_spacing_hz,
            file.ofdm.guard_interval_s,
            file.ofdm.n_symbols,
            file.ofdm.carrier_frequency_hz,
        )?;

        let noise = match (
            file.noise.snr_db,
            file.noise.radar_psd,
            file.noise.comm_noise_power,
        ) {
            (Some(snr), None, None) => NoiseModel::from_snr_db(&params, snr)?,
            (None, Some(psd), Some(comm)) => {
                NoiseModel::flat(params.n_subcarriers(), psd, comm)?
            }
            _ => {
                return Err(Error::config(
                    "noise must specify either snr_db alone or radar_psd together \
                     with comm_noise_power"
                        .to_string(),
                ))
            }
        };

        let explicit_given = file.bounds.radar_lower.is_some()
            || file.bounds.radar_upper.is_some()
            || file.bounds.comm_lower.is_some()
            || file.bounds.comm_upper.is_some();
        let (family, class) = match file.bounds.family.as_str() {
            "baseline" => {
                if file.bounds.width.is_some() {
                    return Err(Error::config(
                        "the baseline bound family takes no width".to_string(),
                    ));
                }
                if explicit_given {
                    return Err(Error::config(
                        "explicit bound vectors are only valid with family \"explicit\""
                            .to_string(),
                    ));
                }
                let family = BoundFamily::Baseline;
                let class = gaussian_bounds(&params, &family)?;
                (Some(family), class)
            }
            name @ ("fixed_lower" | "fixed_upper") => {
                if explicit_given {
                    return Err(Error::config(
                        "explicit bound vectors are only valid with family \"explicit\""
                            .to_string(),
                    ));
                }
                let width = file.bounds.width.ok_or_else(|| {
                    Error::config(format!("the {name} bound family requires a width"))
                })?;
                let family = if name == "fixed_lower" {
                    BoundFamily::FixedLower { width }
                } else {
                    BoundFamily::FixedUpper { width }
                };
                let class = gaussian_bounds(&params, &family)?;
                (Some(family), class)
            }
            "explicit" => {
                if file.bounds.width.is_some() {
                    return Err(Error::config(
                        "the explicit bound family takes no width".to_string(),
                    ));
                }
                let take = |v: Option<Vec<f64>>, name: &str| {
                    v.ok_or_else(|| {
                        Error::config(format!(
                            "the explicit bound family requires {name}"
                        ))
                    })
                };
                let class = UncertaintyClass::new(
                    take(file.bounds.radar_lower, "radar_lower")?,
                    take(file.bounds.radar_upper, "radar_upper")?,
                    take(file.bounds.comm_lower, "comm_lower")?,
                    take(file.bounds.comm_upper, "comm_upper")?,
                )?;
                if class.n_subcarriers() != params.n_subcarriers() {
                    return Err(Error::Dimension {
                        what: "explicit bounds",
                        expected: params.n_subcarriers(),
                        got: class.n_subcarriers(),
                    });
                }
                (None, class)
            }
            other => {
                return Err(Error::config(format!(
                    "unknown bound family {other:?}; expected baseline, fixed_lower, \
                     fixed_upper, or explicit"
                )))
            }
        };

        if !(file.w_c.is_finite() && (0.0..=1.0).contains(&file.w_c)) {
            return Err(Error::config(format!(
                "w_c must lie in [0, 1], got {}",
                file.w_c
            )));
        }
        if !(file.budget.is_finite() && file.budget > 0.0) {
            return Err(Error::config(format!(
                "budget must be positive and finite, got {}",
                file.budget
            )));
        }

        let specific_response = match file.specific_response {
            None => None,
            Some(section) => {
                let point = ResponsePoint::new(section.radar, section.comm)?;
                if point.radar().len() != params.n_subcarriers() {
                    return Err(Error::Dimension {
                        what: "specific_response",
                        expected: params.n_subcarriers(),
                        got: point.radar().len(),
                    });
                }
                if !class.contains(&point) {
                    return Err(Error::config(
                        "specific_response lies outside the uncertainty class".to_string(),
                    ));
                }
                Some(point)
            }
        };

        let sweep = match file.sweep {
            None => None,
            Some(section) => Some(resolve_sweep(section, family.as_ref())?),
        };

        Ok(Scenario {
            params,
            noise,
            family,
            class,
            w_comm: file.w_c,
            budget: file.budget,
            specific_response,
            sweep,
        })
    }

    /// The response the non-robust baseline designs for: the explicit
    /// `specific_response` when given, the class midpoint otherwise.
    pub fn nonrobust_reference(&self) -> ResponsePoint {
        self.specific_response
            .clone()
            .unwrap_or_else(|| self.class.midpoint())
    }

    /// Regenerates the uncertainty class at another width. Only meaningful
    /// for the fixed-lower/fixed-upper families, whose free parameter the
    /// width is.
    pub fn rebuild_class(&self, width: f64) -> Result<UncertaintyClass> {
        let family = match &self.family {
            Some(BoundFamily::FixedLower { .. }) => BoundFamily::FixedLower { width },
            Some(BoundFamily::FixedUpper { .. }) => BoundFamily::FixedUpper { width },
            _ => {
                return Err(Error::config(
                    "width sweeps require the fixed_lower or fixed_upper bound family"
                        .to_string(),
                ))
            }
        };
        gaussian_bounds(&self.params, &family)
    }

    /// Noise model for one point of an SNR sweep.
    pub fn noise_for_snr(&self, snr_db: f64) -> Result<NoiseModel> {
        NoiseModel::from_snr_db(&self.params, snr_db)
    }
}

fn resolve_sweep(section: SweepSection, family: Option<&BoundFamily>) -> Result<SweepAxis> {
    let given = section.snr_db.is_some() as u8
        + section.width.is_some() as u8
        + section.w_c.is_some() as u8;
    if given != 1 {
        return Err(Error::config(
            "sweep must specify exactly one of snr_db, width, or w_c".to_string(),
        ));
    }
    let check_values = |values: &[f64], axis: &str| -> Result<()> {
        if values.is_empty() {
            return Err(Error::config(format!("sweep {axis} list is empty")));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::config(format!(
                "sweep {axis} values must be finite, got {v}"
            )));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(format!(
                "sweep {axis} values must be strictly increasing"
            )));
        }
        Ok(())
    };
    if let Some(values) = section.snr_db {
        check_values(&values, "snr_db")?;
        return Ok(SweepAxis::SnrDb(values));
    }
    if let Some(values) = section.width {
        check_values(&values, "width")?;
        if values.iter().any(|&w| w < 0.0) {
            return Err(Error::config(
                "sweep width values must be nonnegative".to_string(),
            ));
        }
        match family {
            Some(BoundFamily::FixedLower { .. }) | Some(BoundFamily::FixedUpper { .. }) => {}
            _ => {
                return Err(Error::config(
                    "width sweeps require the fixed_lower or fixed_upper bound family"
                        .to_string(),
                ))
            }
        }
        return Ok(SweepAxis::Width(values));
    }
    let values = section.w_c.expect("one axis must be present");
    check_values(&values, "w_c")?;
    if values.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
        return Err(Error::config(
            "sweep w_c values must lie in [0, 1]".to_string(),
        ));
    }
    Ok(SweepAxis::WComm(values))
}
