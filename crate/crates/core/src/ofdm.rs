//! OFDM grid parameters, noise model, and frequency-response uncertainty
//! classes.
//!
//! The pulse under study stacks `n_symbols` OFDM symbols, each carrying
//! `n_subcarriers` subcarriers spaced `subcarrier_spacing` apart. One symbol
//! lasts the elementary duration `1/subcarrier_spacing` plus a guard
//! interval. Targets and channels enter through *squared-magnitude*
//! frequency responses sampled at the subcarrier frequencies; combining a
//! response sample with the local noise level yields the per-subcarrier
//! carrier-to-noise ratio (CNR) that every allocation problem in this crate
//! consumes:
//!
//! * radar: `cnr_m = n_symbols * T_s^2 * rho_m / (psd_m * T_p)` where `T_s`
//!   is the symbol duration, `T_p` the pulse duration, and `psd_m` the radar
//!   noise power spectral density at subcarrier `m`;
//! * comm: `cnr_m = rho_m / comm_noise_power`.
//!
//! Robust design never trusts a single response: it works with interval
//! uncertainty classes that bound each squared response sample from below
//! and above, `0 < lower_m <= upper_m`. [`gaussian_bounds`] generates the
//! bell-shaped magnitude families used by the simulation scenarios.

use rand::Rng;

use crate::error::{check_len, check_positive, Error, Result};

/// Grid and timing parameters of the multicarrier pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmParams {
    n_subcarriers: usize,
    subcarrier_spacing: f64,
    guard_interval: f64,
    n_symbols: usize,
    carrier_frequency: f64,
}

impl OfdmParams {
    /// Validates and builds a parameter set.
    ///
    /// `subcarrier_spacing` is in Hz and must be positive; `guard_interval`
    /// is in seconds and must be nonnegative; `carrier_frequency` is in Hz
    /// and must be nonnegative. Subcarrier and symbol counts must be at
    /// least one.
    pub fn new(
        n_subcarriers: usize,
        subcarrier_spacing: f64,
        guard_interval: f64,
        n_symbols: usize,
        carrier_frequency: f64,
    ) -> Result<Self> {
        if n_subcarriers == 0 {
            return Err(Error::domain("n_subcarriers must be at least 1"));
        }
        if n_symbols == 0 {
            return Err(Error::domain("n_symbols must be at least 1"));
        }
        if !(subcarrier_spacing.is_finite() && subcarrier_spacing > 0.0) {
            return Err(Error::domain(format!(
                "subcarrier_spacing must be positive and finite, got {subcarrier_spacing}"
            )));
        }
        if !(guard_interval.is_finite() && guard_interval >= 0.0) {
            return Err(Error::domain(format!(
                "guard_interval must be nonnegative and finite, got {guard_interval}"
            )));
        }
        if !(carrier_frequency.is_finite() && carrier_frequency >= 0.0) {
            return Err(Error::domain(format!(
                "carrier_frequency must be nonnegative and finite, got {carrier_frequency}"
            )));
        }
        Ok(OfdmParams {
            n_subcarriers,
            subcarrier_spacing,
            guard_interval,
            n_symbols,
            carrier_frequency,
        })
    }

    /// Number of subcarriers per symbol.
    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    /// Subcarrier spacing in Hz.
    pub fn subcarrier_spacing(&self) -> f64 {
        self.subcarrier_spacing
    }

    /// Guard interval in seconds.
    pub fn guard_interval(&self) -> f64 {
        self.guard_interval
    }

    /// Number of OFDM symbols per pulse.
    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    /// Carrier frequency of subcarrier 0 in Hz.
    pub fn carrier_frequency(&self) -> f64 {
        self.carrier_frequency
    }

    /// Elementary (useful) symbol duration, the reciprocal subcarrier
    /// spacing.
    pub fn elementary_duration(&self) -> f64 {
        1.0 / self.subcarrier_spacing
    }

    /// Full symbol duration: elementary duration plus guard interval.
    pub fn symbol_duration(&self) -> f64 {
        self.elementary_duration() + self.guard_interval
    }

    /// Pulse duration: `n_symbols` full symbols.
    pub fn pulse_duration(&self) -> f64 {
        self.n_symbols as f64 * self.symbol_duration()
    }

    /// Absolute frequency of subcarrier `m`.
    pub fn subcarrier_frequency(&self, m: usize) -> f64 {
        self.carrier_frequency + m as f64 * self.subcarrier_spacing
    }

    /// Time-bandwidth product `subcarrier_spacing * pulse_duration` that
    /// scales the radar information metric.
    pub fn time_bandwidth(&self) -> f64 {
        self.subcarrier_spacing * self.pulse_duration()
    }
}

/// Noise levels seen by the two receivers.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    radar_noise_psd: Vec<f64>,
    comm_noise_power: f64,
}

impl NoiseModel {
    /// Validates and builds a noise model from a per-subcarrier radar noise
    /// PSD (W/Hz) and a scalar comm noise power (W). All values must be
    /// positive and finite.
    pub fn new(radar_noise_psd: Vec<f64>, comm_noise_power: f64) -> Result<Self> {
        if radar_noise_psd.is_empty() {
            return Err(Error::Dimension {
                what: "radar_noise_psd",
                expected: 1,
                got: 0,
            });
        }
        check_positive("radar_noise_psd", &radar_noise_psd)?;
        if !(comm_noise_power.is_finite() && comm_noise_power > 0.0) {
            return Err(Error::domain(format!(
                "comm_noise_power must be positive and finite, got {comm_noise_power}"
            )));
        }
        Ok(NoiseModel {
            radar_noise_psd,
            comm_noise_power,
        })
    }

    /// Flat radar noise PSD across `n` subcarriers.
    pub fn flat(n: usize, radar_psd: f64, comm_noise_power: f64) -> Result<Self> {
        NoiseModel::new(vec![radar_psd; n], comm_noise_power)
    }

    /// Builds the flat noise model used by the experiment sweeps.
    ///
    /// With a unit power budget the sweeps define `snr_db = 10*log10(1/s)`
    /// where `s` is simultaneously the comm noise power and the radar noise
    /// PSD integrated over one subcarrier spacing, i.e.
    /// `radar_noise_psd = s / subcarrier_spacing` on every subcarrier.
    pub fn from_snr_db(params: &OfdmParams, snr_db: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::domain(format!("snr_db must be finite, got {snr_db}")));
        }
        let sigma2 = 10f64.powf(-snr_db / 10.0);
        NoiseModel::flat(
            params.n_subcarriers(),
            sigma2 / params.subcarrier_spacing(),
            sigma2,
        )
    }

    /// Radar noise PSD per subcarrier.
    pub fn radar_noise_psd(&self) -> &[f64] {
        &self.radar_noise_psd
    }

    /// Comm receiver noise power.
    pub fn comm_noise_power(&self) -> f64 {
        self.comm_noise_power
    }
}

/// A specific pair of squared-magnitude frequency responses: the radar
/// target response and the comm channel response sampled at the subcarrier
/// frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponsePoint {
    radar: Vec<f64>,
    comm: Vec<f64>,
}

impl ResponsePoint {
    /// Validates and builds a response point. Both vectors must have equal
    /// nonzero length and strictly positive finite entries.
    pub fn new(radar: Vec<f64>, comm: Vec<f64>) -> Result<Self> {
        if radar.is_empty() {
            return Err(Error::Dimension {
                what: "radar response",
                expected: 1,
                got: 0,
            });
        }
        check_len("comm response", &comm, radar.len())?;
        check_positive("radar response", &radar)?;
        check_positive("comm response", &comm)?;
        Ok(ResponsePoint { radar, comm })
    }

    /// Squared-magnitude radar response per subcarrier.
    pub fn radar(&self) -> &[f64] {
        &self.radar
    }

    /// Squared-magnitude comm response per subcarrier.
    pub fn comm(&self) -> &[f64] {
        &self.comm
    }

    /// Number of subcarriers the responses are sampled at.
    pub fn len(&self) -> usize {
        self.radar.len()
    }

    /// Always false: construction rejects empty responses.
    pub fn is_empty(&self) -> bool {
        self.radar.is_empty()
    }
}

/// Componentwise interval uncertainty class for the two squared-magnitude
/// responses: `0 < lower_m <= rho_m <= upper_m` on every subcarrier, for
/// both the radar and the comm response.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyClass {
    radar_lower: Vec<f64>,
    radar_upper: Vec<f64>,
    comm_lower: Vec<f64>,
    comm_upper: Vec<f64>,
}

impl UncertaintyClass {
    /// Validates and builds an uncertainty class. All four vectors must
    /// share one nonzero length, every bound must be positive and finite,
    /// and `lower_m <= upper_m` componentwise (equality allowed: degenerate
    /// classes describe perfectly known responses).
    pub fn new(
        radar_lower: Vec<f64>,
        radar_upper: Vec<f64>,
        comm_lower: Vec<f64>,
        comm_upper: Vec<f64>,
    ) -> Result<Self> {
        if radar_lower.is_empty() {
            return Err(Error::Dimension {
                what: "radar_lower",
                expected: 1,
                got: 0,
            });
        }
        let n = radar_lower.len();
        check_len("radar_upper", &radar_upper, n)?;
        check_len("comm_lower", &comm_lower, n)?;
        check_len("comm_upper", &comm_upper, n)?;
        check_positive("radar_lower", &radar_lower)?;
        check_positive("radar_upper", &radar_upper)?;
        check_positive("comm_lower", &comm_lower)?;
        check_positive("comm_upper", &comm_upper)?;
        for m in 0..n {
            if radar_lower[m] > radar_upper[m] {
                return Err(Error::domain(format!(
                    "radar bounds inverted at subcarrier {m}: {} > {}",
                    radar_lower[m], radar_upper[m]
                )));
            }
            if comm_lower[m] > comm_upper[m] {
                return Err(Error::domain(format!(
                    "comm bounds inverted at subcarrier {m}: {} > {}",
                    comm_lower[m], comm_upper[m]
                )));
            }
        }
        Ok(UncertaintyClass {
            radar_lower,
            radar_upper,
            comm_lower,
            comm_upper,
        })
    }

    /// Degenerate class whose lower and upper bounds both equal `point`.
    /// Solving the robust problem over such a class is exactly the
    /// non-robust design for that specific response.
    pub fn degenerate(point: &ResponsePoint) -> Self {
        UncertaintyClass {
            radar_lower: point.radar().to_vec(),
            radar_upper: point.radar().to_vec(),
            comm_lower: point.comm().to_vec(),
            comm_upper: point.comm().to_vec(),
        }
    }

    /// Number of subcarriers the class covers.
    pub fn n_subcarriers(&self) -> usize {
        self.radar_lower.len()
    }

    /// Componentwise lower bounds of the radar response.
    pub fn radar_lower(&self) -> &[f64] {
        &self.radar_lower
    }

    /// Componentwise upper bounds of the radar response.
    pub fn radar_upper(&self) -> &[f64] {
        &self.radar_upper
    }

    /// Componentwise lower bounds of the comm response.
    pub fn comm_lower(&self) -> &[f64] {
        &self.comm_lower
    }

    /// Componentwise upper bounds of the comm response.
    pub fn comm_upper(&self) -> &[f64] {
        &self.comm_upper
    }

    /// The least favourable member of the class: both responses at their
    /// lower bounds.
    pub fn lower_point(&self) -> ResponsePoint {
        ResponsePoint {
            radar: self.radar_lower.clone(),
            comm: self.comm_lower.clone(),
        }
    }

    /// The most favourable member of the class: both responses at their
    /// upper bounds.
    pub fn upper_point(&self) -> ResponsePoint {
        ResponsePoint {
            radar: self.radar_upper.clone(),
            comm: self.comm_upper.clone(),
        }
    }

    /// Componentwise midpoint of the class, the default stand-in for a
    /// "specific known response" when comparing against non-robust designs.
    pub fn midpoint(&self) -> ResponsePoint {
        let mid = |lo: &[f64], up: &[f64]| {
            lo.iter()
                .zip(up)
                .map(|(&l, &u)| 0.5 * (l + u))
                .collect::<Vec<f64>>()
        };
        ResponsePoint {
            radar: mid(&self.radar_lower, &self.radar_upper),
            comm: mid(&self.comm_lower, &self.comm_upper),
        }
    }

    /// Whether `point` lies inside the class (componentwise, inclusive).
    pub fn contains(&self, point: &ResponsePoint) -> bool {
        point.len() == self.n_subcarriers()
            && point
                .radar()
                .iter()
                .zip(&self.radar_lower)
                .zip(&self.radar_upper)
                .all(|((&r, &l), &u)| l <= r && r <= u)
            && point
                .comm()
                .iter()
                .zip(&self.comm_lower)
                .zip(&self.comm_upper)
                .all(|((&c, &l), &u)| l <= c && c <= u)
    }

    /// Draws a member of the class componentwise-uniformly.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ResponsePoint {
        let draw = |lo: &[f64], up: &[f64], rng: &mut R| {
            lo.iter()
                .zip(up)
                .map(|(&l, &u)| if u > l { rng.gen_range(l..=u) } else { l })
                .collect::<Vec<f64>>()
        };
        ResponsePoint {
            radar: draw(&self.radar_lower, &self.radar_upper, rng),
            comm: draw(&self.comm_lower, &self.comm_upper, rng),
        }
    }
}

/// Per-subcarrier carrier-to-noise ratios for the two tasks.
#[derive(Debug, Clone, PartialEq)]
pub struct CnrProfile {
    /// Radar CNR per subcarrier (`cnr` such that one unit of power yields
    /// `log(1 + cnr)` of radar information per subcarrier).
    pub radar: Vec<f64>,
    /// Comm CNR per subcarrier.
    pub comm: Vec<f64>,
}

impl CnrProfile {
    /// Validates and builds a CNR profile with positive finite entries and
    /// matching lengths.
    pub fn new(radar: Vec<f64>, comm: Vec<f64>) -> Result<Self> {
        if radar.is_empty() {
            return Err(Error::Dimension {
                what: "radar cnr",
                expected: 1,
                got: 0,
            });
        }
        check_len("comm cnr", &comm, radar.len())?;
        check_positive("radar cnr", &radar)?;
        check_positive("comm cnr", &comm)?;
        Ok(CnrProfile { radar, comm })
    }

    /// Number of subcarriers.
    pub fn len(&self) -> usize {
        self.radar.len()
    }

    /// Always false: construction rejects empty profiles.
    pub fn is_empty(&self) -> bool {
        self.radar.is_empty()
    }
}

/// Maps a specific response point to its per-subcarrier CNRs.
///
/// Radar: `cnr_m = n_symbols * T_s^2 * rho_m / (psd_m * T_p)`; the CNR is
/// linear in the response sample and inversely proportional to the local
/// noise PSD. Comm: `cnr_m = rho_m / comm_noise_power`.
///
/// # Errors
///
/// Dimension error when the response or noise vectors do not match the
/// grid; domain error for nonpositive responses or noise (checked at
/// construction of the inputs, re-checked here for the PSD length).
pub fn cnr_from_response(
    params: &OfdmParams,
    noise: &NoiseModel,
    point: &ResponsePoint,
) -> Result<CnrProfile> {
    let n = params.n_subcarriers();
    check_len("response", point.radar(), n)?;
    check_len("radar_noise_psd", noise.radar_noise_psd(), n)?;
    let ts = params.symbol_duration();
    let tp = params.pulse_duration();
    let radar_gain = params.n_symbols() as f64 * ts * ts / tp;
    let radar = point
        .radar()
        .iter()
        .zip(noise.radar_noise_psd())
        .map(|(&rho, &psd)| radar_gain * rho / psd)
        .collect();
    let comm = point
        .comm()
        .iter()
        .map(|&rho| rho / noise.comm_noise_power())
        .collect();
    CnrProfile::new(radar, comm)
}

/// Families of bell-shaped magnitude bounds used by the simulation
/// scenarios. Magnitudes are squared to produce the uncertainty class.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundFamily {
    /// Fixed lower and upper magnitude curves: the radar bell sits at
    /// mid-band with the upper curve offset by 2, the comm bell sits 30
    /// bins above mid-band with the upper curve offset by 1.5.
    Baseline,
    /// Baseline lower curves with the upper magnitude `lower + width`;
    /// sweeping `width` widens the class upward while the worst case stays
    /// fixed.
    FixedLower {
        /// Magnitude gap between the curves; must be nonnegative.
        width: f64,
    },
    /// Fixed upper magnitude curves at `5.1 + bell` with the lower
    /// magnitude `max(upper - width, 1e-3)`; sweeping `width` widens the
    /// class downward while the best case stays fixed.
    FixedUpper {
        /// Magnitude gap between the curves; must be nonnegative.
        width: f64,
    },
}

/// Scale factor of the radar magnitude bell.
const RADAR_BELL_SCALE: f64 = 2.0;
/// Scale factor of the comm magnitude bell.
const COMM_BELL_SCALE: f64 = 3.0;
/// Offset of the comm bell centre above mid-band, in subcarrier bins.
const COMM_BELL_OFFSET: f64 = 30.0;
/// Magnitude gap of the baseline radar family.
const BASELINE_RADAR_GAP: f64 = 2.0;
/// Magnitude gap of the baseline comm family.
const BASELINE_COMM_GAP: f64 = 1.5;
/// Upper magnitude level of the fixed-upper family.
const FIXED_UPPER_LEVEL: f64 = 5.1;
/// Smallest lower-bound magnitude the fixed-upper family may reach; keeps
/// the squared lower bounds strictly positive for any width.
const MIN_LOWER_MAGNITUDE: f64 = 1e-3;

fn radar_bell(m: usize, n: usize) -> f64 {
    let x = RADAR_BELL_SCALE * (m as f64 - n as f64 / 2.0) / n as f64;
    (-x * x).exp()
}

fn comm_bell(m: usize, n: usize) -> f64 {
    let x = COMM_BELL_SCALE * (m as f64 - n as f64 / 2.0 - COMM_BELL_OFFSET) / n as f64;
    (-x * x).exp()
}

/// Generates the squared-magnitude uncertainty class of a bound family on
/// the given grid.
///
/// # Errors
///
/// Domain error for a negative width.
pub fn gaussian_bounds(params: &OfdmParams, family: &BoundFamily) -> Result<UncertaintyClass> {
    let n = params.n_subcarriers();
    if let BoundFamily::FixedLower { width } | BoundFamily::FixedUpper { width } = family {
        if !(width.is_finite() && *width >= 0.0) {
            return Err(Error::domain(format!(
                "bound family width must be nonnegative and finite, got {width}"
            )));
        }
    }
    let mut radar_lower = Vec::with_capacity(n);
    let mut radar_upper = Vec::with_capacity(n);
    let mut comm_lower = Vec::with_capacity(n);
    let mut comm_upper = Vec::with_capacity(n);
    for m in 0..n {
        let (rl, ru, cl, cu) = match family {
            BoundFamily::Baseline => {
                let r = radar_bell(m, n);
                let c = comm_bell(m, n);
                (r, BASELINE_RADAR_GAP + r, c, BASELINE_COMM_GAP + c)
            }
            BoundFamily::FixedLower { width } => {
                let r = radar_bell(m, n);
                let c = comm_bell(m, n);
                (r, r + width, c, c + width)
            }
            BoundFamily::FixedUpper { width } => {
                let ru = FIXED_UPPER_LEVEL + radar_bell(m, n);
                let cu = FIXED_UPPER_LEVEL + comm_bell(m, n);
                (
                    (ru - width).max(MIN_LOWER_MAGNITUDE),
                    ru,
                    (cu - width).max(MIN_LOWER_MAGNITUDE),
                    cu,
                )
            }
        };
        radar_lower.push(rl * rl);
        radar_upper.push(ru * ru);
        comm_lower.push(cl * cl);
        comm_upper.push(cu * cu);
    }
    UncertaintyClass::new(radar_lower, radar_upper, comm_lower, comm_upper)
}
