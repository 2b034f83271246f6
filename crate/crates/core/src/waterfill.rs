//! Exact water-filling over parallel channels.
//!
//! Maximising `sum_m log(1 + p_m * cnr_m)` over `p_m >= 0`,
//! `sum_m p_m = budget` has the classical water-filling optimum
//! `p_m = max(level - 1/cnr_m, 0)`, with the water `level` chosen so the
//! budget is met. The active-set size can be found exactly in finitely many
//! steps: sort the inverse CNRs ascending and take the largest `k` for
//! which the candidate level `(budget + sum of the k smallest inverses)/k`
//! still clears the k-th smallest inverse. No iterative tolerance is
//! involved; the result satisfies its optimality conditions to rounding
//! error (see [`crate::tol::WATERFILL_KKT`]).
//!
//! [`radar_optimal`] and [`comm_optimal`] wrap the generic routine for the
//! two single-task designs, reporting the optimum in the task's own units.

use crate::error::{check_positive, Error, Result};
use crate::metrics::{self, PowerAllocation};
use crate::ofdm::{cnr_from_response, NoiseModel, OfdmParams, ResponsePoint};

/// Outcome of a water-filling solve.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillResult {
    /// The optimal allocation.
    pub allocation: PowerAllocation,
    /// Water level: every active subcarrier satisfies
    /// `p_m = level - 1/cnr_m`; every inactive one has `1/cnr_m >= level`.
    pub water_level: f64,
    /// Indices with strictly positive power, ascending.
    pub active_set: Vec<usize>,
    /// Objective at the optimum. For [`waterfill`] this is
    /// `sum_m log2(1 + p_m cnr_m)`; the task-specific wrappers replace it
    /// with the task metric (bits per pulse / bits per second).
    pub optimal_value: f64,
    /// True when the requested budget was zero: the allocation is all
    /// zeros and the water level is the limiting value `min_m 1/cnr_m`.
    pub zero_budget: bool,
}

/// Exact water-filling for the CNR vector `cnr` and total `budget`.
///
/// # Errors
///
/// Dimension error for an empty `cnr`; domain error for nonpositive or
/// non-finite CNR entries or a negative/non-finite budget. A zero budget
/// is degenerate rather than an error; the result is flagged.
pub fn waterfill(cnr: &[f64], budget: f64) -> Result<WaterfillResult> {
    if cnr.is_empty() {
        return Err(Error::Dimension {
            what: "cnr",
            expected: 1,
            got: 0,
        });
    }
    check_positive("cnr", cnr)?;
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::domain(format!(
            "budget must be nonnegative and finite, got {budget}"
        )));
    }
    let n = cnr.len();
    let inv: Vec<f64> = cnr.iter().map(|&c| 1.0 / c).collect();

    if budget == 0.0 {
        let level = inv.iter().cloned().fold(f64::INFINITY, f64::min);
        return Ok(WaterfillResult {
            allocation: PowerAllocation::zeros(n, 0.0)?,
            water_level: level,
            active_set: Vec::new(),
            optimal_value: 0.0,
            zero_budget: true,
        });
    }

    // Sort subcarriers by inverse CNR ascending, ties broken by index so
    // identical CNRs behave deterministically (they end up with equal
    // power either way, since power depends only on level - inverse).
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inv[a].partial_cmp(&inv[b]).unwrap().then(a.cmp(&b)));

    // prefix[k] = sum of the k smallest inverse CNRs.
    let mut prefix = vec![0.0; n + 1];
    for (k, &idx) in order.iter().enumerate() {
        prefix[k + 1] = prefix[k] + inv[idx];
    }

    // Largest k whose candidate level clears the k-th smallest inverse is
    // the exact active-set size; k = 1 always qualifies since budget > 0.
    let mut active_k = 1;
    let mut level = budget + prefix[1];
    for k in (1..=n).rev() {
        let candidate = (budget + prefix[k]) / k as f64;
        if candidate > inv[order[k - 1]] {
            active_k = k;
            level = candidate;
            break;
        }
    }

    let mut powers = vec![0.0; n];
    let mut active_set = Vec::with_capacity(active_k);
    for &idx in order.iter().take(active_k) {
        powers[idx] = level - inv[idx];
        active_set.push(idx);
    }
    active_set.sort_unstable();

    let optimal_value: f64 = powers
        .iter()
        .zip(cnr)
        .map(|(&p, &c)| (p * c).ln_1p())
        .sum::<f64>()
        / std::f64::consts::LN_2;

    Ok(WaterfillResult {
        allocation: PowerAllocation::new(powers, budget)?,
        water_level: level,
        active_set,
        optimal_value,
        zero_budget: false,
    })
}

/// Water-filling for the radar task at a specific response point;
/// `optimal_value` is the mutual information in bits per pulse.
pub fn radar_optimal(
    params: &OfdmParams,
    noise: &NoiseModel,
    point: &ResponsePoint,
    budget: f64,
) -> Result<WaterfillResult> {
    let cnr = cnr_from_response(params, noise, point)?;
    let mut result = waterfill(&cnr.radar, budget)?;
    result.optimal_value = metrics::mutual_information(params, &result.allocation, &cnr.radar)?;
    Ok(result)
}

/// Water-filling for the comm task at a specific response point;
/// `optimal_value` is the data information rate in bits per second.
pub fn comm_optimal(
    params: &OfdmParams,
    noise: &NoiseModel,
    point: &ResponsePoint,
    budget: f64,
) -> Result<WaterfillResult> {
    let cnr = cnr_from_response(params, noise, point)?;
    let mut result = waterfill(&cnr.comm, budget)?;
    result.optimal_value =
        metrics::data_information_rate(params, &result.allocation, &cnr.comm)?;
    Ok(result)
}

/// Maximum violation of the water-filling optimality conditions:
/// `|level - 1/cnr_m - p_m|` on active subcarriers, `max(level - 1/cnr_m, 0)`
/// on inactive ones, and the budget gap `|sum p - budget|`.
///
/// Exposed so tests and verification reports can re-check any result
/// independently of how it was produced.
pub fn waterfill_residual(result: &WaterfillResult, cnr: &[f64]) -> f64 {
    let mut worst: f64 = (result.allocation.total() - result.allocation.budget()).abs();
    if result.zero_budget {
        return worst;
    }
    for (&p, &c) in result.allocation.powers().iter().zip(cnr) {
        let slack = result.water_level - 1.0 / c;
        let r = if p > 0.0 { (slack - p).abs() } else { slack.max(0.0) };
        worst = worst.max(r);
    }
    worst
}
