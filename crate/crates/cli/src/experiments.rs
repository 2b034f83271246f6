//! The experiment runners behind the CLI subcommands.
//!
//! Every runner takes a resolved [`Scenario`] and produces rows plus
//! self-describing metadata. The non-robust baseline is always the joint
//! optimum for a single assumed response (the scenario's
//! `specific_response`, or the class midpoint when none is given), solved
//! with the same objective configuration as the robust design so the two
//! columns are directly comparable.

use radcom_core::metrics::{
    compute_normalizers, data_information_rate, mutual_information, ObjectiveConfig,
    PowerAllocation,
};
use radcom_core::ofdm::{
    cnr_from_response, BoundFamily, NoiseModel, OfdmParams, ResponsePoint, UncertaintyClass,
};
use radcom_core::robust::solve_robust;
use radcom_core::scenario::{Scenario, SweepAxis};
use radcom_core::spectrum::approximation_report;
use radcom_core::{Error, Result};

use crate::output::{format_sig, render_csv};

/// One sweep point: both designs evaluated at both class extremes.
///
/// `dir_*` columns are data information rates in bits/s, `mi_*` columns are
/// mutual informations in bits per pulse; `*_lower`/`*_upper` evaluate the
/// same allocation with the responses pinned at the class lower/upper
/// bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub sweep_value: f64,
    pub dir_robust_lower: f64,
    pub dir_robust_upper: f64,
    pub dir_nonrobust_lower: f64,
    pub dir_nonrobust_upper: f64,
    pub mi_robust_lower: f64,
    pub mi_robust_upper: f64,
    pub mi_nonrobust_lower: f64,
    pub mi_nonrobust_upper: f64,
}

impl ExperimentRow {
    /// CSV column names, in field order.
    pub const HEADER: [&'static str; 9] = [
        "sweep_value",
        "dir_robust_lower",
        "dir_robust_upper",
        "dir_nonrobust_lower",
        "dir_nonrobust_upper",
        "mi_robust_lower",
        "mi_robust_upper",
        "mi_nonrobust_lower",
        "mi_nonrobust_upper",
    ];

    fn cells(&self) -> Vec<String> {
        [
            self.sweep_value,
            self.dir_robust_lower,
            self.dir_robust_upper,
            self.dir_nonrobust_lower,
            self.dir_nonrobust_upper,
            self.mi_robust_lower,
            self.mi_robust_upper,
            self.mi_nonrobust_lower,
            self.mi_nonrobust_upper,
        ]
        .iter()
        .map(|&v| format_sig(v))
        .collect()
    }
}

/// Rows plus metadata from one sweep subcommand.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<ExperimentRow>,
}

impl SweepOutput {
    /// Renders the deterministic CSV document.
    pub fn render(&self) -> String {
        let rows: Vec<Vec<String>> = self.rows.iter().map(ExperimentRow::cells).collect();
        render_csv(&self.metadata, &ExperimentRow::HEADER, &rows)
    }
}

fn reference_label(scenario: &Scenario) -> String {
    if scenario.specific_response.is_some() {
        "scenario specific_response".to_string()
    } else {
        "class midpoint".to_string()
    }
}

/// Solves both designs: the robust allocation for the class, and the
/// non-robust allocation for the single `reference` response, under one
/// shared objective configuration.
fn design_pair(
    params: &OfdmParams,
    noise: &NoiseModel,
    class: &UncertaintyClass,
    reference: &ResponsePoint,
    cfg: &ObjectiveConfig,
    budget: f64,
) -> Result<(PowerAllocation, PowerAllocation)> {
    let robust = solve_robust(params, noise, class, cfg, budget)?.allocation;
    let known = UncertaintyClass::degenerate(reference);
    let nonrobust = solve_robust(params, noise, &known, cfg, budget)?.allocation;
    Ok((robust, nonrobust))
}

/// Evaluates both allocations at both class extremes.
fn evaluate_pair(
    params: &OfdmParams,
    noise: &NoiseModel,
    class: &UncertaintyClass,
    robust: &PowerAllocation,
    nonrobust: &PowerAllocation,
    sweep_value: f64,
) -> Result<ExperimentRow> {
    let lo = cnr_from_response(params, noise, &class.lower_point())?;
    let up = cnr_from_response(params, noise, &class.upper_point())?;
    Ok(ExperimentRow {
        sweep_value,
        dir_robust_lower: data_information_rate(params, robust, &lo.comm)?,
        dir_robust_upper: data_information_rate(params, robust, &up.comm)?,
        dir_nonrobust_lower: data_information_rate(params, nonrobust, &lo.comm)?,
        dir_nonrobust_upper: data_information_rate(params, nonrobust, &up.comm)?,
        mi_robust_lower: mutual_information(params, robust, &lo.radar)?,
        mi_robust_upper: mutual_information(params, robust, &up.radar)?,
        mi_nonrobust_lower: mutual_information(params, nonrobust, &lo.radar)?,
        mi_nonrobust_upper: mutual_information(params, nonrobust, &up.radar)?,
    })
}

/// Sweeps the SNR knob: the noise model, the objective normalizers, and
/// both designs are rebuilt at every point.
pub fn run_snr_sweep(scenario: &Scenario) -> Result<SweepOutput> {
    let values = match &scenario.sweep {
        Some(SweepAxis::SnrDb(values)) => values.clone(),
        _ => {
            return Err(Error::Config(
                "sweep-snr needs a scenario whose sweep axis is snr_db".to_string(),
            ))
        }
    };
    let params = &scenario.params;
    let reference = scenario.nonrobust_reference();
    let mut rows = Vec::with_capacity(values.len());
    for &snr in &values {
        let noise = scenario.noise_for_snr(snr)?;
        let cfg = ObjectiveConfig::from_class(
            params,
            &noise,
            &scenario.class,
            scenario.budget,
            scenario.w_comm,
        )?;
        let (robust, nonrobust) = design_pair(
            params,
            &noise,
            &scenario.class,
            &reference,
            &cfg,
            scenario.budget,
        )?;
        rows.push(evaluate_pair(
            params,
            &noise,
            &scenario.class,
            &robust,
            &nonrobust,
            snr,
        )?);
    }
    let metadata = vec![
        ("axis".to_string(), "snr_db".to_string()),
        ("budget".to_string(), format_sig(scenario.budget)),
        ("w_c".to_string(), format_sig(scenario.w_comm)),
        (
            "nonrobust_response".to_string(),
            reference_label(scenario),
        ),
        (
            "units".to_string(),
            "dir bits/s; mi bits per pulse".to_string(),
        ),
    ];
    Ok(SweepOutput { metadata, rows })
}

/// Sweeps the bound-family width. The objective configuration and the
/// non-robust design are frozen at the first (smallest) width so that rows
/// differ only through the class itself; this is what makes the fixed-lower
/// family's `*_lower` columns and the fixed-upper family's
/// `*_nonrobust_upper` columns constant across the sweep.
pub fn run_width_sweep(scenario: &Scenario) -> Result<SweepOutput> {
    let values = match &scenario.sweep {
        Some(SweepAxis::Width(values)) => values.clone(),
        _ => {
            return Err(Error::Config(
                "sweep-width needs a scenario whose sweep axis is width".to_string(),
            ))
        }
    };
    let params = &scenario.params;
    let noise = &scenario.noise;
    let first_class = scenario.rebuild_class(values[0])?;
    let reference = scenario
        .specific_response
        .clone()
        .unwrap_or_else(|| first_class.midpoint());
    let cfg = ObjectiveConfig::from_class(
        params,
        noise,
        &first_class,
        scenario.budget,
        scenario.w_comm,
    )?;
    let known = UncertaintyClass::degenerate(&reference);
    let nonrobust = solve_robust(params, noise, &known, &cfg, scenario.budget)?.allocation;

    let mut rows = Vec::with_capacity(values.len());
    for &width in &values {
        let class = scenario.rebuild_class(width)?;
        let robust = solve_robust(params, noise, &class, &cfg, scenario.budget)?.allocation;
        rows.push(evaluate_pair(
            params, noise, &class, &robust, &nonrobust, width,
        )?);
    }
    let family = match &scenario.family {
        Some(BoundFamily::FixedLower { .. }) => "fixed_lower",
        Some(BoundFamily::FixedUpper { .. }) => "fixed_upper",
        _ => unreachable!("width sweeps require a fixed bound family"),
    };
    let metadata = vec![
        ("axis".to_string(), "width".to_string()),
        ("family".to_string(), family.to_string()),
        ("budget".to_string(), format_sig(scenario.budget)),
        ("w_c".to_string(), format_sig(scenario.w_comm)),
        ("reference_width".to_string(), format_sig(values[0])),
        (
            "nonrobust_response".to_string(),
            reference_label(scenario),
        ),
        (
            "units".to_string(),
            "dir bits/s; mi bits per pulse".to_string(),
        ),
    ];
    Ok(SweepOutput { metadata, rows })
}

/// Sweeps the communications weight with the normalizers frozen, tracing
/// the radar/comm trade-off curve.
pub fn run_tradeoff(scenario: &Scenario) -> Result<SweepOutput> {
    let values = match &scenario.sweep {
        Some(SweepAxis::WComm(values)) => values.clone(),
        _ => {
            return Err(Error::Config(
                "tradeoff needs a scenario whose sweep axis is w_c".to_string(),
            ))
        }
    };
    let params = &scenario.params;
    let noise = &scenario.noise;
    let (radar_norm, comm_norm) =
        compute_normalizers(params, noise, &scenario.class, scenario.budget)?;
    let reference = scenario.nonrobust_reference();

    let mut rows = Vec::with_capacity(values.len());
    for &w_comm in &values {
        let cfg = ObjectiveConfig::new(params, w_comm, radar_norm, comm_norm)?;
        let (robust, nonrobust) = design_pair(
            params,
            noise,
            &scenario.class,
            &reference,
            &cfg,
            scenario.budget,
        )?;
        rows.push(evaluate_pair(
            params,
            noise,
            &scenario.class,
            &robust,
            &nonrobust,
            w_comm,
        )?);
    }
    let metadata = vec![
        ("axis".to_string(), "w_c".to_string()),
        ("budget".to_string(), format_sig(scenario.budget)),
        ("radar_norm".to_string(), format_sig(radar_norm)),
        ("comm_norm".to_string(), format_sig(comm_norm)),
        (
            "nonrobust_response".to_string(),
            reference_label(scenario),
        ),
        (
            "units".to_string(),
            "dir bits/s; mi bits per pulse".to_string(),
        ),
    ];
    Ok(SweepOutput { metadata, rows })
}

/// The robust allocation for the scenario: per-subcarrier powers plus the
/// dual multiplier and the information metrics at both class extremes.
#[derive(Debug, Clone)]
pub struct PlanOutput {
    pub metadata: Vec<(String, String)>,
    pub powers: Vec<f64>,
}

impl PlanOutput {
    /// Renders the deterministic CSV document.
    pub fn render(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .powers
            .iter()
            .enumerate()
            .map(|(m, &p)| vec![m.to_string(), format_sig(p)])
            .collect();
        render_csv(&self.metadata, &["subcarrier", "power"], &rows)
    }
}

/// Computes the robust allocation for the scenario.
pub fn plan(scenario: &Scenario) -> Result<PlanOutput> {
    let params = &scenario.params;
    let noise = &scenario.noise;
    let cfg = ObjectiveConfig::from_class(
        params,
        noise,
        &scenario.class,
        scenario.budget,
        scenario.w_comm,
    )?;
    let solution = solve_robust(params, noise, &scenario.class, &cfg, scenario.budget)?;
    let lo = cnr_from_response(params, noise, &scenario.class.lower_point())?;
    let up = cnr_from_response(params, noise, &scenario.class.upper_point())?;
    let alloc = &solution.allocation;
    let metadata = vec![
        ("budget".to_string(), format_sig(scenario.budget)),
        ("w_c".to_string(), format_sig(scenario.w_comm)),
        ("multiplier".to_string(), format_sig(solution.multiplier)),
        (
            "kkt_residual".to_string(),
            format_sig(solution.kkt_residual),
        ),
        (
            "normalized_objective".to_string(),
            format_sig(solution.worst_case_value),
        ),
        (
            "mi_lower_bits".to_string(),
            format_sig(mutual_information(params, alloc, &lo.radar)?),
        ),
        (
            "mi_upper_bits".to_string(),
            format_sig(mutual_information(params, alloc, &up.radar)?),
        ),
        (
            "dir_lower_bits_per_s".to_string(),
            format_sig(data_information_rate(params, alloc, &lo.comm)?),
        ),
        (
            "dir_upper_bits_per_s".to_string(),
            format_sig(data_information_rate(params, alloc, &up.comm)?),
        ),
    ];
    Ok(PlanOutput {
        metadata,
        powers: solution.allocation.powers().to_vec(),
    })
}

/// Per-subcarrier spectral-approximation errors for one allocation.
#[derive(Debug, Clone)]
pub struct SpectrumOutput {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<(usize, f64)>,
}

impl SpectrumOutput {
    /// Renders the deterministic CSV document.
    pub fn render(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|&(m, e)| vec![m.to_string(), format_sig(e)])
            .collect();
        render_csv(&self.metadata, &["subcarrier", "relative_error"], &rows)
    }
}

/// Reports how far each subcarrier's expected spectrum height deviates from
/// its own power because of guard-interval leakage from the others, for
/// either the robust allocation or a uniform one.
pub fn spectrum_report(scenario: &Scenario, uniform: bool) -> Result<SpectrumOutput> {
    let params = &scenario.params;
    let n = params.n_subcarriers();
    let (powers, allocation_label) = if uniform {
        (vec![scenario.budget / n as f64; n], "uniform")
    } else {
        let cfg = ObjectiveConfig::from_class(
            params,
            &scenario.noise,
            &scenario.class,
            scenario.budget,
            scenario.w_comm,
        )?;
        let solution =
            solve_robust(params, &scenario.noise, &scenario.class, &cfg, scenario.budget)?;
        (solution.allocation.powers().to_vec(), "robust")
    };
    let weights: Vec<f64> = powers.iter().map(|p| p.sqrt()).collect();
    let report = approximation_report(&weights, params)?;
    let max_error = report
        .iter()
        .map(|e| e.relative_error)
        .fold(0.0f64, f64::max);
    let rows: Vec<(usize, f64)> = report
        .iter()
        .map(|e| (e.subcarrier, e.relative_error))
        .collect();
    let metadata = vec![
        ("allocation".to_string(), allocation_label.to_string()),
        ("budget".to_string(), format_sig(scenario.budget)),
        (
            "spacing_times_symbol_duration".to_string(),
            format_sig(params.subcarrier_spacing() * params.symbol_duration()),
        ),
        ("max_relative_error".to_string(), format_sig(max_error)),
    ];
    Ok(SpectrumOutput { metadata, rows })
}
