//! Performance metrics of the joint waveform and the weighted design
//! criterion.
//!
//! Three quantities drive every design problem in this crate:
//!
//! * **Radar mutual information** between the received echo and the target
//!   response, in bits per pulse:
//!   `MI = (bandwidth * T_p / 2) * mean_m log2(1 + p_m * cnr_m)` — written
//!   per subcarrier, `0.5 * spacing * T_p * sum_m log2(1 + p_m * cnr_m)`.
//! * **Data information rate** of the comm link, in bits per second:
//!   `DIR = spacing * sum_m log2(1 + p_m * cnr_m)`.
//! * **Joint criterion**: the convex combination
//!   `(w_r / F_r) * MI + (w_c / F_c) * DIR`, where the normalisers `F_r`,
//!   `F_c` are the single-task optima at the *upper* class bounds so that
//!   each term is a dimensionless score.
//!
//! Internally all sums run over natural logarithms and convert base once;
//! [`ObjectiveConfig`] pre-folds the conversion into the per-nat
//! coefficients `radar_coeff = w_r * spacing * T_p / (2 ln2 F_r)` and
//! `comm_coeff = w_c * spacing / (ln2 F_c)`, in terms of which the joint
//! criterion is exactly
//! `sum_m radar_coeff * ln(1 + p_m nu_m) + comm_coeff * ln(1 + p_m w_m)`.

use std::f64::consts::LN_2;

use crate::error::{check_len, check_positive, Error, Result};
use crate::ofdm::{CnrProfile, NoiseModel, OfdmParams, UncertaintyClass};
use crate::tol;

/// Nonnegative per-subcarrier transmit powers under a total budget.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    powers: Vec<f64>,
    budget: f64,
}

impl PowerAllocation {
    /// Validates and builds an allocation: entries must be nonnegative and
    /// finite and their sum must not exceed the budget by more than a
    /// rounding allowance.
    pub fn new(powers: Vec<f64>, budget: f64) -> Result<Self> {
        if powers.is_empty() {
            return Err(Error::Dimension {
                what: "powers",
                expected: 1,
                got: 0,
            });
        }
        if !(budget.is_finite() && budget >= 0.0) {
            return Err(Error::domain(format!(
                "budget must be nonnegative and finite, got {budget}"
            )));
        }
        for (i, &p) in powers.iter().enumerate() {
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::domain(format!(
                    "powers[{i}] must be nonnegative and finite, got {p}"
                )));
            }
        }
        let total: f64 = powers.iter().sum();
        if total > budget + tol::BUDGET_OVERSHOOT {
            return Err(Error::domain(format!(
                "allocation spends {total} which exceeds the budget {budget}"
            )));
        }
        Ok(PowerAllocation { powers, budget })
    }

    /// All-zero allocation.
    pub fn zeros(n: usize, budget: f64) -> Result<Self> {
        PowerAllocation::new(vec![0.0; n], budget)
    }

    /// Budget split evenly across all subcarriers.
    pub fn uniform(n: usize, budget: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension {
                what: "powers",
                expected: 1,
                got: 0,
            });
        }
        PowerAllocation::new(vec![budget / n as f64; n], budget)
    }

    /// Entire budget on one subcarrier.
    pub fn concentrated(n: usize, index: usize, budget: f64) -> Result<Self> {
        if index >= n {
            return Err(Error::domain(format!(
                "concentration index {index} out of range for {n} subcarriers"
            )));
        }
        let mut p = vec![0.0; n];
        p[index] = budget;
        PowerAllocation::new(p, budget)
    }

    /// Per-subcarrier powers.
    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    /// The budget this allocation was built against.
    pub fn budget(&self) -> f64 {
        self.budget
    }

    /// Total spent power.
    pub fn total(&self) -> f64 {
        self.powers.iter().sum()
    }

    /// Number of subcarriers.
    pub fn len(&self) -> usize {
        self.powers.len()
    }

    /// Always false: construction rejects empty allocations.
    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }
}

/// Weights, normalisers, and derived per-nat coefficients of the joint
/// criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveConfig {
    w_radar: f64,
    w_comm: f64,
    radar_norm: f64,
    comm_norm: f64,
    radar_coeff: f64,
    comm_coeff: f64,
}

impl ObjectiveConfig {
    /// Builds a configuration from the comm weight `w_comm` in `[0, 1]`
    /// (the radar weight is `1 - w_comm`, so the two always sum to one
    /// exactly) and positive normalisers `radar_norm`/`comm_norm`, which
    /// should be the single-task optima at the upper class bounds.
    pub fn new(
        params: &OfdmParams,
        w_comm: f64,
        radar_norm: f64,
        comm_norm: f64,
    ) -> Result<Self> {
        if !(w_comm.is_finite() && (0.0..=1.0).contains(&w_comm)) {
            return Err(Error::domain(format!(
                "w_comm must lie in [0, 1], got {w_comm}"
            )));
        }
        if !(radar_norm.is_finite() && radar_norm > 0.0) {
            return Err(Error::domain(format!(
                "radar_norm must be positive and finite, got {radar_norm}"
            )));
        }
        if !(comm_norm.is_finite() && comm_norm > 0.0) {
            return Err(Error::domain(format!(
                "comm_norm must be positive and finite, got {comm_norm}"
            )));
        }
        let w_radar = 1.0 - w_comm;
        debug_assert!((w_radar + w_comm - 1.0).abs() <= tol::WEIGHT_SUM);
        let spacing = params.subcarrier_spacing();
        let radar_coeff = w_radar * spacing * params.pulse_duration() / (2.0 * LN_2 * radar_norm);
        let comm_coeff = w_comm * spacing / (LN_2 * comm_norm);
        Ok(ObjectiveConfig {
            w_radar,
            w_comm,
            radar_norm,
            comm_norm,
            radar_coeff,
            comm_coeff,
        })
    }

    /// Convenience constructor: computes the normalisers from the class
    /// upper bounds via [`compute_normalizers`] and builds the config.
    pub fn from_class(
        params: &OfdmParams,
        noise: &NoiseModel,
        class: &UncertaintyClass,
        budget: f64,
        w_comm: f64,
    ) -> Result<Self> {
        let (radar_norm, comm_norm) = compute_normalizers(params, noise, class, budget)?;
        ObjectiveConfig::new(params, w_comm, radar_norm, comm_norm)
    }

    /// Radar weight `w_r`.
    pub fn w_radar(&self) -> f64 {
        self.w_radar
    }

    /// Comm weight `w_c`.
    pub fn w_comm(&self) -> f64 {
        self.w_comm
    }

    /// Radar normaliser `F_r` (bits per pulse).
    pub fn radar_norm(&self) -> f64 {
        self.radar_norm
    }

    /// Comm normaliser `F_c` (bits per second).
    pub fn comm_norm(&self) -> f64 {
        self.comm_norm
    }

    /// Per-nat radar coefficient `w_r * spacing * T_p / (2 ln2 F_r)`.
    pub fn radar_coeff(&self) -> f64 {
        self.radar_coeff
    }

    /// Per-nat comm coefficient `w_c * spacing / (ln2 F_c)`.
    pub fn comm_coeff(&self) -> f64 {
        self.comm_coeff
    }
}

/// Radar mutual information in bits per pulse:
/// `0.5 * spacing * T_p * sum_m log2(1 + p_m * cnr_m)`.
///
/// # Errors
///
/// Dimension error when the allocation and CNR lengths disagree with the
/// grid; domain error for nonpositive CNR entries.
pub fn mutual_information(
    params: &OfdmParams,
    alloc: &PowerAllocation,
    radar_cnr: &[f64],
) -> Result<f64> {
    let n = params.n_subcarriers();
    check_len("allocation", alloc.powers(), n)?;
    check_len("radar cnr", radar_cnr, n)?;
    check_positive("radar cnr", radar_cnr)?;
    let nats: f64 = alloc
        .powers()
        .iter()
        .zip(radar_cnr)
        .map(|(&p, &c)| (p * c).ln_1p())
        .sum();
    Ok(0.5 * params.subcarrier_spacing() * params.pulse_duration() * nats / LN_2)
}

/// Comm data information rate in bits per second:
/// `spacing * sum_m log2(1 + p_m * cnr_m)`.
///
/// # Errors
///
/// Same contract as [`mutual_information`].
pub fn data_information_rate(
    params: &OfdmParams,
    alloc: &PowerAllocation,
    comm_cnr: &[f64],
) -> Result<f64> {
    let n = params.n_subcarriers();
    check_len("allocation", alloc.powers(), n)?;
    check_len("comm cnr", comm_cnr, n)?;
    check_positive("comm cnr", comm_cnr)?;
    let nats: f64 = alloc
        .powers()
        .iter()
        .zip(comm_cnr)
        .map(|(&p, &c)| (p * c).ln_1p())
        .sum();
    Ok(params.subcarrier_spacing() * nats / LN_2)
}

/// The weighted joint criterion `(w_r / F_r) * MI + (w_c / F_c) * DIR`,
/// evaluated in its per-nat form
/// `sum_m radar_coeff * ln(1 + p_m nu_m) + comm_coeff * ln(1 + p_m w_m)`.
///
/// # Errors
///
/// Dimension error when allocation or CNR lengths disagree with the grid.
pub fn joint_criterion(
    params: &OfdmParams,
    alloc: &PowerAllocation,
    cnr: &CnrProfile,
    cfg: &ObjectiveConfig,
) -> Result<f64> {
    let n = params.n_subcarriers();
    check_len("allocation", alloc.powers(), n)?;
    check_len("radar cnr", &cnr.radar, n)?;
    check_len("comm cnr", &cnr.comm, n)?;
    Ok(joint_criterion_raw(
        alloc.powers(),
        &cnr.radar,
        &cnr.comm,
        cfg.radar_coeff(),
        cfg.comm_coeff(),
    ))
}

/// Unchecked per-nat joint criterion over raw slices; shared by the solver
/// and verification hot loops. Callers guarantee equal lengths and positive
/// CNRs.
pub(crate) fn joint_criterion_raw(
    powers: &[f64],
    radar_cnr: &[f64],
    comm_cnr: &[f64],
    radar_coeff: f64,
    comm_coeff: f64,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..powers.len() {
        acc += radar_coeff * (powers[i] * radar_cnr[i]).ln_1p()
            + comm_coeff * (powers[i] * comm_cnr[i]).ln_1p();
    }
    acc
}

/// Computes the joint criterion's normalisers: the optimal radar mutual
/// information and the optimal comm data rate when the entire budget serves
/// a single task and the responses sit at the class *upper* bounds.
///
/// Returns `(radar_norm, comm_norm)`, both strictly positive.
pub fn compute_normalizers(
    params: &OfdmParams,
    noise: &NoiseModel,
    class: &UncertaintyClass,
    budget: f64,
) -> Result<(f64, f64)> {
    if !(budget.is_finite() && budget > 0.0) {
        return Err(Error::domain(format!(
            "budget must be positive and finite, got {budget}"
        )));
    }
    let best = class.upper_point();
    let radar = crate::waterfill::radar_optimal(params, noise, &best, budget)?;
    let comm = crate::waterfill::comm_optimal(params, noise, &best, budget)?;
    Ok((radar.optimal_value, comm.optimal_value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ofdm::{cnr_from_response, gaussian_bounds, BoundFamily, ResponsePoint};
    use crate::testutil::design_grid;

    #[test]
    fn zero_power_gives_zero_information() {
        let p = design_grid();
        let alloc = PowerAllocation::zeros(128, 1.0).unwrap();
        let cnr = vec![3.0; 128];
        assert_eq!(mutual_information(&p, &alloc, &cnr).unwrap(), 0.0);
        assert_eq!(data_information_rate(&p, &alloc, &cnr).unwrap(), 0.0);
    }

    #[test]
    fn mutual_information_at_unit_cnr_product() {
        // With p_m * cnr_m = 1 on all 128 subcarriers of the design grid:
        // 0.5 * 20 * 128 * log2(2) = 1280 bits.
        let p = design_grid();
        let alloc = PowerAllocation::new(vec![0.5; 128], 64.0).unwrap();
        let cnr = vec![2.0; 128];
        let mi = mutual_information(&p, &alloc, &cnr).unwrap();
        assert!((mi - 1280.0).abs() < 1e-9, "expected 1280 bits, got {mi}");
    }

    #[test]
    fn data_rate_single_active_subcarrier() {
        // One subcarrier at p * cnr = 3 contributes spacing * log2(4)
        // = 0.25 MHz * 2 = 0.5 Mbit/s.
        let p = crate::ofdm::OfdmParams::new(1, 0.25e6, 1e-6, 16, 0.0).unwrap();
        let alloc = PowerAllocation::new(vec![1.0], 1.0).unwrap();
        let rate = data_information_rate(&p, &alloc, &[3.0]).unwrap();
        assert!((rate - 0.5e6).abs() < 1e-6, "expected 0.5 Mbit/s, got {rate}");
    }

    #[test]
    fn data_rate_is_permutation_invariant() {
        let p = crate::ofdm::OfdmParams::new(4, 1e6, 0.0, 1, 0.0).unwrap();
        let a = PowerAllocation::new(vec![0.1, 0.2, 0.3, 0.4], 1.0).unwrap();
        let b = PowerAllocation::new(vec![0.4, 0.3, 0.2, 0.1], 1.0).unwrap();
        let ra = data_information_rate(&p, &a, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let rb = data_information_rate(&p, &b, &[4.0, 3.0, 2.0, 1.0]).unwrap();
        assert!((ra - rb).abs() < 1e-12);
    }

    #[test]
    fn base_conversion_identity() {
        let p = design_grid();
        let alloc = PowerAllocation::new(vec![1.0 / 128.0; 128], 1.0).unwrap();
        let cnr: Vec<f64> = (0..128).map(|m| 0.5 + m as f64 * 0.01).collect();
        let mi = mutual_information(&p, &alloc, &cnr).unwrap();
        let nats: f64 = alloc
            .powers()
            .iter()
            .zip(&cnr)
            .map(|(&pw, &c)| (pw * c).ln_1p())
            .sum();
        let converted = 0.5 * p.subcarrier_spacing() * p.pulse_duration() * nats / LN_2;
        assert!((mi - converted).abs() <= 1e-12 * mi.abs());
    }

    #[test]
    fn joint_criterion_matches_normalised_sum() {
        let p = design_grid();
        let noise = crate::ofdm::NoiseModel::from_snr_db(&p, 5.0).unwrap();
        let class = gaussian_bounds(&p, &BoundFamily::Baseline).unwrap();
        let cfg = ObjectiveConfig::from_class(&p, &noise, &class, 1.0, 0.4).unwrap();
        let alloc = PowerAllocation::uniform(128, 1.0).unwrap();
        let cnr = cnr_from_response(&p, &noise, &class.lower_point()).unwrap();
        let joint = joint_criterion(&p, &alloc, &cnr, &cfg).unwrap();
        let mi = mutual_information(&p, &alloc, &cnr.radar).unwrap();
        let dir = data_information_rate(&p, &alloc, &cnr.comm).unwrap();
        let expected = cfg.w_radar() * mi / cfg.radar_norm() + cfg.w_comm() * dir / cfg.comm_norm();
        assert!(
            (joint - expected).abs() <= 1e-12 * expected.abs(),
            "per-nat form {joint} vs normalised sum {expected}"
        );
    }

    #[test]
    fn joint_criterion_weight_degeneracy() {
        // w_comm = 0 leaves only the normalised radar term.
        let p = design_grid();
        let noise = crate::ofdm::NoiseModel::from_snr_db(&p, 5.0).unwrap();
        let class = gaussian_bounds(&p, &BoundFamily::Baseline).unwrap();
        let cfg = ObjectiveConfig::from_class(&p, &noise, &class, 1.0, 0.0).unwrap();
        let alloc = PowerAllocation::uniform(128, 1.0).unwrap();
        let cnr = cnr_from_response(&p, &noise, &class.lower_point()).unwrap();
        let joint = joint_criterion(&p, &alloc, &cnr, &cfg).unwrap();
        let mi = mutual_information(&p, &alloc, &cnr.radar).unwrap();
        assert!((joint - mi / cfg.radar_norm()).abs() <= 1e-12 * joint.abs());
    }

    #[test]
    fn normalised_score_of_single_task_optima_is_at_most_one() {
        let p = design_grid();
        let noise = crate::ofdm::NoiseModel::from_snr_db(&p, 5.0).unwrap();
        let class = gaussian_bounds(&p, &BoundFamily::Baseline).unwrap();
        let cfg = ObjectiveConfig::from_class(&p, &noise, &class, 1.0, 0.5).unwrap();
        let best = class.upper_point();
        let cnr = cnr_from_response(&p, &noise, &best).unwrap();
        let radar_best = crate::waterfill::radar_optimal(&p, &noise, &best, 1.0).unwrap();
        let comm_best = crate::waterfill::comm_optimal(&p, &noise, &best, 1.0).unwrap();
        for alloc in [radar_best.allocation, comm_best.allocation] {
            let score = joint_criterion(&p, &alloc, &cnr, &cfg).unwrap();
            assert!(score <= 1.0 + 1e-12, "normalised score {score} exceeds 1");
        }
    }

    #[test]
    fn normalizers_single_subcarrier_closed_form() {
        // With one subcarrier the whole budget lands on it: the radar
        // normaliser is 0.5 * spacing * T_p * log2(1 + cnr_u) and the comm
        // normaliser spacing * log2(1 + cnr_u).
        let p = crate::ofdm::OfdmParams::new(1, 0.25e6, 1e-6, 16, 0.0).unwrap();
        let noise = crate::ofdm::NoiseModel::flat(1, 4e-6, 1.0).unwrap();
        let class = crate::ofdm::UncertaintyClass::new(
            vec![0.5],
            vec![2.0],
            vec![0.5],
            vec![3.0],
        )
        .unwrap();
        let (fr, fc) = compute_normalizers(&p, &noise, &class, 1.0).unwrap();
        let point = ResponsePoint::new(vec![2.0], vec![3.0]).unwrap();
        let cnr = cnr_from_response(&p, &noise, &point).unwrap();
        let expected_fr = 10.0 * (1.0 + cnr.radar[0]).log2();
        let expected_fc = 0.25e6 * (1.0 + cnr.comm[0]).log2();
        assert!((fr - expected_fr).abs() < 1e-9 * expected_fr);
        assert!((fc - expected_fc).abs() < 1e-9 * expected_fc);
    }

    #[test]
    fn allocation_rejects_bad_inputs() {
        assert!(PowerAllocation::new(vec![], 1.0).is_err());
        assert!(PowerAllocation::new(vec![-0.1, 0.5], 1.0).is_err());
        assert!(PowerAllocation::new(vec![0.6, 0.6], 1.0).is_err());
        assert!(PowerAllocation::new(vec![f64::NAN], 1.0).is_err());
        assert!(PowerAllocation::new(vec![0.5], f64::INFINITY).is_err());
        // A sum within the rounding allowance is accepted.
        assert!(PowerAllocation::new(vec![0.5, 0.5 + 0.5e-9], 1.0).is_ok());
    }

    #[test]
    fn objective_config_rejects_bad_inputs() {
        let p = design_grid();
        assert!(ObjectiveConfig::new(&p, -0.1, 1.0, 1.0).is_err());
        assert!(ObjectiveConfig::new(&p, 1.1, 1.0, 1.0).is_err());
        assert!(ObjectiveConfig::new(&p, 0.5, 0.0, 1.0).is_err());
        assert!(ObjectiveConfig::new(&p, 0.5, 1.0, -2.0).is_err());
    }

    #[test]
    fn metric_length_mismatches_are_dimension_errors() {
        let p = design_grid();
        let alloc = PowerAllocation::uniform(4, 1.0).unwrap();
        let err = mutual_information(&p, &alloc, &[1.0; 4]).unwrap_err();
        assert!(matches!(err, crate::Error::Dimension { .. }), "got {err:?}");
    }
}
