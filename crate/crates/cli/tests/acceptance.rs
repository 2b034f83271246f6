//! Acceptance suite: eleven headline claims about the solver stack, each a
//! single test with its tolerance stated inline, so the harness prints one
//! pass/fail line per claim.
//!
//! Two claims are asserted exactly as promised and are expected to fail,
//! because the promise itself turns out to be false for the committed
//! baseline setup rather than because of any solver defect:
//!
//! * `criterion_08`: the robust design's worst-case *rate* beats the
//!   midpoint design at every SNR, but its worst-case *information* does
//!   not below ~12 dB. The minimax guarantee covers the weighted sum, and
//!   the weighted sum does dominate everywhere; the per-metric split is a
//!   qualitative reading of simulation plots that does not survive a 1e-9
//!   slack at the class midpoint (probes of alternative conventions —
//!   per-design normalizers, frozen normalizers, magnitude-space midpoint,
//!   rescaled noise — all reproduce the violation).
//! * `criterion_09`: the trade-off frontier is provably monotone at the
//!   design point (lower bounds) and those columns pass; the upper-bound
//!   evaluations apply a lower-bound-tuned allocation to a much flatter
//!   channel and genuinely dip by up to ~1.6% over the weight range.
//!
//! The assertions are left at full strength so the failures stay visible.

use std::f64::consts::LN_2;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use radcom_cli::experiments::{run_snr_sweep, run_tradeoff, ExperimentRow};
use radcom_core::metrics::{
    data_information_rate, joint_criterion, mutual_information, ObjectiveConfig,
};
use radcom_core::ofdm::{
    cnr_from_response, gaussian_bounds, BoundFamily, CnrProfile, NoiseModel, OfdmParams,
};
use radcom_core::robust::{
    solve_robust, solve_robust_from_cnr, verify_saddle_point, verify_worst_allocation,
    worst_allocation_condition, InverseCnrs,
};
use radcom_core::scenario::Scenario;
use radcom_core::simplex::maximize_separable_on_face;
use radcom_core::spectrum::{
    approximation_report, expected_power_spectrum, monte_carlo_power_spectrum,
};
use radcom_core::waterfill::{waterfill, waterfill_residual};

fn params_for(n: usize) -> OfdmParams {
    OfdmParams::new(n, 2.5e5, 1e-6, 16, 0.0).unwrap()
}

fn design_grid() -> OfdmParams {
    params_for(128)
}

/// Objective normalizers that make the per-subcarrier coefficients equal
/// the raw weights, keeping lattice-oracle objective gaps O(step^2).
fn weight_normalized_config(params: &OfdmParams, w_comm: f64) -> ObjectiveConfig {
    let radar_norm = params.time_bandwidth() / (2.0 * LN_2);
    let comm_norm = params.subcarrier_spacing() / LN_2;
    ObjectiveConfig::new(params, w_comm, radar_norm, comm_norm).unwrap()
}

fn baseline_scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn load_scenario(name: &str) -> Scenario {
    let text = std::fs::read_to_string(baseline_scenario_path(name)).unwrap();
    Scenario::from_json_str(&text).unwrap()
}

fn random_cnrs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.1..10.0)).collect()
}

/// Water-filling beats a 1e-3-step exhaustive lattice on 100 random
/// two-to-four-subcarrier instances and satisfies its stationarity
/// conditions to 1e-9, in under ten seconds.
#[test]
fn criterion_01_waterfilling_exactness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    for trial in 0..100 {
        let n = 2 + trial % 3;
        let cnr = random_cnrs(&mut rng, n);
        let result = waterfill(&cnr, 1.0).unwrap();
        let residual = waterfill_residual(&result, &cnr);
        assert!(
            residual <= 1e-9,
            "trial {trial}: stationarity residual {residual} beyond 1e-9"
        );
        let (_, grid_value) =
            maximize_separable_on_face(n, 1.0, 1e-3, |m, x| (1.0 + x * cnr[m]).log2());
        assert!(
            result.optimal_value >= grid_value - 1e-9,
            "trial {trial}: water-filling value {} below lattice max {grid_value}",
            result.optimal_value
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "criterion 1 took {elapsed:.1} s, limit 10 s");
}

/// The closed-form robust solution matches a 1e-4-step lattice optimizer
/// of the joint objective on 50 random three-subcarrier instances: within
/// 2e-3 per power and 1e-6 on the objective, in under a minute.
#[test]
fn criterion_02_robust_closed_form_vs_brute_force() {
    let start = Instant::now();
    let params = params_for(3);
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    for trial in 0..50 {
        let cnr = CnrProfile::new(random_cnrs(&mut rng, 3), random_cnrs(&mut rng, 3)).unwrap();
        let w = rng.gen_range(0.0..=1.0);
        let cfg = weight_normalized_config(&params, w);
        let solution = solve_robust_from_cnr(&params, &cnr, &cfg, 1.0).unwrap();
        let a = cfg.radar_coeff();
        let b = cfg.comm_coeff();
        let (grid_powers, grid_value) = maximize_separable_on_face(3, 1.0, 1e-4, |m, x| {
            a * (1.0 + x * cnr.radar[m]).ln() + b * (1.0 + x * cnr.comm[m]).ln()
        });
        for (m, (&p, &q)) in solution
            .allocation
            .powers()
            .iter()
            .zip(&grid_powers)
            .enumerate()
        {
            assert!(
                (p - q).abs() <= 2e-3,
                "trial {trial}: power {m} differs {p} vs {q}"
            );
        }
        let value = joint_criterion(&params, &solution.allocation, &cnr, &cfg).unwrap();
        assert!(
            (value - grid_value).abs() <= 1e-6,
            "trial {trial}: objective {value} vs lattice {grid_value}"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "criterion 2 took {elapsed:.1} s, limit 60 s");
}

/// With all weight on one metric the robust solution collapses to plain
/// water-filling on that metric's lower-bound CNRs, to 1e-9 per power,
/// over 100 random instances.
#[test]
fn criterion_03_weight_degeneracy_reductions() {
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    for trial in 0..100 {
        let n = 2 + trial % 9;
        let params = params_for(n);
        let cnr = CnrProfile::new(random_cnrs(&mut rng, n), random_cnrs(&mut rng, n)).unwrap();
        for (w, single) in [(0.0, &cnr.radar), (1.0, &cnr.comm)] {
            let cfg = weight_normalized_config(&params, w);
            let robust = solve_robust_from_cnr(&params, &cnr, &cfg, 1.0).unwrap();
            let reference = waterfill(single, 1.0).unwrap();
            for (m, (&p, &q)) in robust
                .allocation
                .powers()
                .iter()
                .zip(reference.allocation.powers())
                .enumerate()
            {
                assert!(
                    (p - q).abs() <= 1e-9,
                    "trial {trial}, w_c {w}: power {m} is {p}, water-filling gives {q}"
                );
            }
        }
    }
}

/// Every robust solve on the baseline class across a 30 dB SNR range and
/// three weightings lands within 1e-7 of stationarity and within 1e-10 of
/// spending the unit budget exactly.
#[test]
fn criterion_04_kkt_residual_on_baseline_grid() {
    let params = design_grid();
    let class = gaussian_bounds(&params, &BoundFamily::Baseline).unwrap();
    for snr in [-10.0, 0.0, 10.0, 20.0] {
        let noise = NoiseModel::from_snr_db(&params, snr).unwrap();
        for w in [0.1, 0.5, 0.9] {
            let cfg = ObjectiveConfig::from_class(&params, &noise, &class, 1.0, w).unwrap();
            let solution = solve_robust(&params, &noise, &class, &cfg, 1.0).unwrap();
            assert!(
                solution.kkt_residual <= 1e-7,
                "snr {snr}, w_c {w}: residual {}",
                solution.kkt_residual
            );
            let gap = (solution.allocation.total() - 1.0).abs();
            assert!(gap <= 1e-10, "snr {snr}, w_c {w}: budget gap {gap}");
        }
    }
}

/// The robust solution is a saddle point: no sampled in-class response does
/// worse than the lower bounds and no sampled allocation does better at the
/// lower bounds, over 200 + 200 seeded samples.
#[test]
fn criterion_05_saddle_point_property() {
    let params = design_grid();
    let noise = NoiseModel::from_snr_db(&params, 5.0).unwrap();
    let class = gaussian_bounds(&params, &BoundFamily::Baseline).unwrap();
    let cfg = ObjectiveConfig::from_class(&params, &noise, &class, 1.0, 0.5).unwrap();
    let solution = solve_robust(&params, &noise, &class, &cfg, 1.0).unwrap();
    let report = verify_saddle_point(&params, &noise, &class, &cfg, &solution, 200, 7).unwrap();
    assert_eq!(
        report.violations, 0,
        "saddle margins dipped below -1e-9: response {} allocation {}",
        report.min_response_margin, report.min_allocation_margin
    );
    assert!(report.passed);
}

/// Both information metrics are monotone across the class: for the robust
/// allocation, every sampled interior response scores between the lower
/// and upper bounds, slack 1e-9, over 100 samples.
#[test]
fn criterion_06_interior_responses_between_bounds() {
    let params = design_grid();
    let noise = NoiseModel::from_snr_db(&params, 5.0).unwrap();
    let class = gaussian_bounds(&params, &BoundFamily::Baseline).unwrap();
    let cfg = ObjectiveConfig::from_class(&params, &noise, &class, 1.0, 0.5).unwrap();
    let alloc = solve_robust(&params, &noise, &class, &cfg, 1.0)
        .unwrap()
        .allocation;
    let lower = cnr_from_response(&params, &noise, &class.lower_point()).unwrap();
    let upper = cnr_from_response(&params, &noise, &class.upper_point()).unwrap();
    let mi_lower = mutual_information(&params, &alloc, &lower.radar).unwrap();
    let mi_upper = mutual_information(&params, &alloc, &upper.radar).unwrap();
    let dir_lower = data_information_rate(&params, &alloc, &lower.comm).unwrap();
    let dir_upper = data_information_rate(&params, &alloc, &upper.comm).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for sample in 0..100 {
        let point = class.sample(&mut rng);
        let cnr = cnr_from_response(&params, &noise, &point).unwrap();
        let mi = mutual_information(&params, &alloc, &cnr.radar).unwrap();
        let dir = data_information_rate(&params, &alloc, &cnr.comm).unwrap();
        assert!(
            mi_lower - 1e-9 <= mi && mi <= mi_upper + 1e-9,
            "sample {sample}: information {mi} outside [{mi_lower}, {mi_upper}]"
        );
        assert!(
            dir_lower - 1e-9 <= dir && dir <= dir_upper + 1e-9,
            "sample {sample}: rate {dir} outside [{dir_lower}, {dir_upper}]"
        );
    }
}

/// Concentrating the budget on a jointly worst subcarrier minimises the
/// joint objective against a 1e-3-step lattice on 20 random two-subcarrier
/// instances that have such a subcarrier.
#[test]
fn criterion_07a_worst_allocation_brute_force() {
    let params = params_for(2);
    let mut rng = ChaCha8Rng::seed_from_u64(7007);
    for trial in 0..20 {
        let mut radar = random_cnrs(&mut rng, 2);
        let mut comm = random_cnrs(&mut rng, 2);
        radar.sort_by(|a, b| a.partial_cmp(b).unwrap());
        comm.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let cnr = CnrProfile::new(radar, comm).unwrap();
        let w = rng.gen_range(0.0..=1.0);
        let cfg = weight_normalized_config(&params, w);
        let report = verify_worst_allocation(&cnr, &cfg, 1.0, 1e-3).unwrap();
        assert_eq!(report.minimizer, 0, "trial {trial}: wrong minimizer");
        assert!(
            report.passed,
            "trial {trial}: concentration beaten by {} on a {}-point lattice",
            report.max_violation, report.grid_points
        );
    }
}

/// When one subcarrier's marginal value dominates even after absorbing the
/// whole budget, the solver provably concentrates: at least 1 - 1e-9 of
/// the budget lands on it, on 10 constructed instances.
#[test]
fn criterion_07b_concentration_condition() {
    let mut rng = ChaCha8Rng::seed_from_u64(7117);
    for trial in 0..10 {
        let n = 3 + trial % 4;
        let params = params_for(n);
        let mut radar: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.2)).collect();
        let mut comm: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.2)).collect();
        radar[0] = rng.gen_range(50.0..100.0);
        comm[0] = rng.gen_range(50.0..100.0);
        let cnr = CnrProfile::new(radar, comm).unwrap();
        let w = rng.gen_range(0.0..=1.0);
        let cfg = weight_normalized_config(&params, w);
        let inv = InverseCnrs::from_cnr(&cnr);
        assert!(
            worst_allocation_condition(&inv, &cfg, 0).unwrap(),
            "trial {trial}: construction must satisfy the concentration condition"
        );
        let solution = solve_robust_from_cnr(&params, &cnr, &cfg, 1.0).unwrap();
        let p0 = solution.allocation.powers()[0];
        assert!(
            p0 >= 1.0 - 1e-9,
            "trial {trial}: only {p0} of the budget on the dominant subcarrier"
        );
    }
}

/// At the class lower bounds the robust design beats the midpoint-designed
/// baseline in *both* metrics at every SNR from -10 to 20 dB. Expected to
/// fail: the rate half holds everywhere, the information half does not
/// below ~12 dB (see the module docs).
#[test]
fn criterion_08_dominance_at_lower_bounds() {
    let scenario = load_scenario("baseline.json");
    let output = run_snr_sweep(&scenario).unwrap();
    let mut violations = Vec::new();
    for row in &output.rows {
        if row.dir_robust_lower < row.dir_nonrobust_lower - 1e-9 {
            violations.push(format!(
                "snr {} dB: worst-case rate {} below the midpoint design's {}",
                row.sweep_value, row.dir_robust_lower, row.dir_nonrobust_lower
            ));
        }
        if row.mi_robust_lower < row.mi_nonrobust_lower - 1e-9 {
            violations.push(format!(
                "snr {} dB: worst-case information {} below the midpoint design's {}",
                row.sweep_value, row.mi_robust_lower, row.mi_nonrobust_lower
            ));
        }
    }
    assert!(
        violations.is_empty(),
        "robust design dominated at the lower bounds:\n{}",
        violations.join("\n")
    );
}

/// Along the weight sweep every rate column is nondecreasing and every
/// information column nonincreasing. Expected to fail: the design-point
/// columns are monotone, but the upper-bound evaluations dip by up to
/// ~1.6% (see the module docs).
#[test]
fn criterion_09_tradeoff_monotonicity() {
    let scenario = load_scenario("tradeoff.json");
    let output = run_tradeoff(&scenario).unwrap();
    assert_eq!(output.rows.len(), 11, "w_c 0..1 step 0.1 gives 11 rows");
    type Column = fn(&ExperimentRow) -> f64;
    let columns: [(&str, Column, bool); 8] = [
        ("dir_robust_lower", |r| r.dir_robust_lower, true),
        ("dir_robust_upper", |r| r.dir_robust_upper, true),
        ("dir_nonrobust_lower", |r| r.dir_nonrobust_lower, true),
        ("dir_nonrobust_upper", |r| r.dir_nonrobust_upper, true),
        ("mi_robust_lower", |r| r.mi_robust_lower, false),
        ("mi_robust_upper", |r| r.mi_robust_upper, false),
        ("mi_nonrobust_lower", |r| r.mi_nonrobust_lower, false),
        ("mi_nonrobust_upper", |r| r.mi_nonrobust_upper, false),
    ];
    let mut violations = Vec::new();
    for (name, extract, nondecreasing) in columns {
        for pair in output.rows.windows(2) {
            let (prev, next) = (extract(&pair[0]), extract(&pair[1]));
            let broken = if nondecreasing {
                next < prev - 1e-9
            } else {
                next > prev + 1e-9
            };
            if broken {
                violations.push(format!(
                    "{name} moves {prev} -> {next} between w_c {} and {}",
                    pair[0].sweep_value, pair[1].sweep_value
                ));
            }
        }
    }
    assert!(
        violations.is_empty(),
        "trade-off columns broke monotonicity:\n{}",
        violations.join("\n")
    );
}

/// Without a guard interval the subcarriers are exactly orthogonal at
/// their own frequencies: every per-subcarrier approximation error is
/// numerically zero.
#[test]
fn criterion_10a_no_guard_interval_is_exact() {
    let params = OfdmParams::new(128, 2.5e5, 0.0, 16, 0.0).unwrap();
    let weights = vec![(1.0f64 / 128.0).sqrt(); 128];
    for entry in approximation_report(&weights, &params).unwrap() {
        assert!(
            entry.relative_error <= 1e-12,
            "subcarrier {}: error {} with no guard interval",
            entry.subcarrier,
            entry.relative_error
        );
    }
}

/// On the simulation grid with its 1 us guard interval, the cross-term
/// fraction of the expected spectrum stays at or below 0.15 on every
/// subcarrier under a uniform allocation.
#[test]
fn criterion_10b_guard_interval_crossterms_bounded() {
    let params = design_grid();
    let weights = vec![(1.0f64 / 128.0).sqrt(); 128];
    for entry in approximation_report(&weights, &params).unwrap() {
        assert!(
            entry.relative_error <= 0.15,
            "subcarrier {}: cross-term fraction {}",
            entry.subcarrier,
            entry.relative_error
        );
    }
}

/// Ten thousand Monte Carlo trials reproduce the closed-form expected
/// spectrum within four standard errors on every subcarrier, in under two
/// minutes.
#[test]
fn criterion_10c_monte_carlo_matches_expected_spectrum() {
    let start = Instant::now();
    let params = design_grid();
    let weights = vec![(1.0f64 / 128.0).sqrt(); 128];
    let trials = 10_000;
    let mc = monte_carlo_power_spectrum(&weights, &params, trials, 7).unwrap();
    for k in 0..params.n_subcarriers() {
        let expected = expected_power_spectrum(&weights, &params, mc.frequencies[k]).unwrap();
        let standard_error = mc.std_dev[k] / (trials as f64).sqrt();
        let gap = (mc.mean[k] - expected).abs();
        assert!(
            gap <= 4.0 * standard_error,
            "subcarrier {k}: |{} - {expected}| = {gap} exceeds 4 standard errors ({standard_error})",
            mc.mean[k]
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "criterion 10c took {elapsed:.1} s, limit 120 s");
}

/// Re-running any subcommand with the same scenario and seed produces a
/// byte-identical output file.
#[test]
fn criterion_11_byte_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &str, &[&str]); 6] = [
        ("plan", "baseline.json", &[]),
        ("sweep-snr", "baseline.json", &[]),
        ("sweep-width", "width_fixed_lower.json", &[]),
        ("tradeoff", "tradeoff.json", &[]),
        ("verify-spectrum", "baseline.json", &["--uniform"]),
        ("verify", "baseline.json", &["--seed", "7"]),
    ];
    for (subcommand, scenario, extra) in cases {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{subcommand}-{run}.txt"));
            let status = Command::new(env!("CARGO_BIN_EXE_radcom"))
                .arg(subcommand)
                .arg("--scenario")
                .arg(baseline_scenario_path(scenario))
                .arg("--out")
                .arg(&out)
                .args(extra)
                .status()
                .unwrap();
            assert!(status.success(), "{subcommand} run {run} failed");
            outputs.push(std::fs::read(&out).unwrap());
        }
        assert_eq!(
            outputs[0], outputs[1],
            "{subcommand} output changed between identical runs"
        );
    }
}
