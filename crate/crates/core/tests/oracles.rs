//! Cross-checks of the analytic solvers against brute-force lattice search.
//!
//! The solvers under test compute optima in closed form (water-filling) or by
//! per-subcarrier closed form plus bisection (joint robust design). Each is
//! compared here against an independent maximization over the budget-face
//! lattice, which knows nothing about either derivation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::LN_2;

use radcom_core::metrics::ObjectiveConfig;
use radcom_core::ofdm::{
    gaussian_bounds, BoundFamily, CnrProfile, NoiseModel, OfdmParams, UncertaintyClass,
};
use radcom_core::robust::{solve_robust, solve_robust_from_cnr};
use radcom_core::simplex::maximize_separable_on_face;
use radcom_core::tol;
use radcom_core::waterfill::{waterfill, waterfill_residual};

fn params_for(n: usize) -> OfdmParams {
    OfdmParams::new(n, 2.5e5, 1e-6, 16, 0.0).unwrap()
}

/// Water-filling must dominate every point of a 1e-3-step budget lattice
/// and satisfy its optimality conditions, across random CNR vectors.
#[test]
fn waterfilling_beats_every_lattice_allocation() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for trial in 0..100 {
        let n = 2 + trial % 3;
        let cnr: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let result = waterfill(&cnr, 1.0).unwrap();
        assert!(waterfill_residual(&result, &cnr) <= tol::WATERFILL_KKT);

        let (_, lattice_best) =
            maximize_separable_on_face(n, 1.0, 1e-3, |i, p| (p * cnr[i]).ln_1p() / LN_2);
        assert!(
            result.optimal_value >= lattice_best - 1e-9,
            "trial {trial}: solver {} < lattice {}",
            result.optimal_value,
            lattice_best
        );
    }
}

/// The robust closed form must dominate the joint-criterion lattice maximum
/// for random lower-bound CNRs and weights.
#[test]
fn robust_solver_beats_the_joint_lattice() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for trial in 0..30 {
        let n = 2 + trial % 3;
        let radar: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let comm: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let w_comm: f64 = rng.gen_range(0.0..=1.0);

        let params = params_for(n);
        let cfg = ObjectiveConfig::new(&params, w_comm, 1.0, 1.0).unwrap();
        let cnr = CnrProfile::new(radar.clone(), comm.clone()).unwrap();
        let solution = solve_robust_from_cnr(&params, &cnr, &cfg, 1.0).unwrap();

        let (a, b) = (cfg.radar_coeff(), cfg.comm_coeff());
        let (_, lattice_best) = maximize_separable_on_face(n, 1.0, 1e-3, |i, p| {
            a * (p * radar[i]).ln_1p() + b * (p * comm[i]).ln_1p()
        });
        assert!(
            solution.worst_case_value >= lattice_best - 1e-6,
            "trial {trial}: solver {} < lattice {}",
            solution.worst_case_value,
            lattice_best
        );
    }
}

/// The robust allocation itself must sit close to the argmax of a fine
/// lattice search: the lattice optimizer can differ from the continuous one
/// only by rounding, never by picking a different region of the face.
#[test]
fn robust_allocation_stays_near_the_fine_lattice_argmax() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for trial in 0..5 {
        let n = 3;
        let radar: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let comm: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let w_comm: f64 = rng.gen_range(0.0..=1.0);

        let params = params_for(n);
        // Normalizers chosen so the per-task coefficients are exactly the
        // weights; keeps the objective O(1) so lattice rounding is the only
        // source of disagreement.
        let radar_norm = params.time_bandwidth() / (2.0 * LN_2);
        let comm_norm = params.subcarrier_spacing() / LN_2;
        let cfg = ObjectiveConfig::new(&params, w_comm, radar_norm, comm_norm).unwrap();
        let cnr = CnrProfile::new(radar.clone(), comm.clone()).unwrap();
        let solution = solve_robust_from_cnr(&params, &cnr, &cfg, 1.0).unwrap();

        let (a, b) = (cfg.radar_coeff(), cfg.comm_coeff());
        let (lattice_point, _) = maximize_separable_on_face(n, 1.0, 1e-4, |i, p| {
            a * (p * radar[i]).ln_1p() + b * (p * comm[i]).ln_1p()
        });
        for (m, (&solved, &gridded)) in solution
            .allocation
            .powers()
            .iter()
            .zip(&lattice_point)
            .enumerate()
        {
            let diff = (solved - gridded).abs();
            assert!(
                diff <= 2e-3,
                "trial {trial}, power {m}: solver {solved} vs lattice {gridded}"
            );
        }
    }
}

/// With normalizers computed from the class itself, the optimized joint
/// criterion on a perfectly known channel peaks at 1: each task's share is
/// its achieved fraction of that task's own optimum.
#[test]
fn normalized_criterion_peaks_at_one() {
    let params = OfdmParams::new(128, 2.5e5, 1e-6, 16, 0.0).unwrap();
    let noise = NoiseModel::from_snr_db(&params, 5.0).unwrap();
    let base = gaussian_bounds(&params, &BoundFamily::Baseline).unwrap();
    let known = UncertaintyClass::degenerate(&base.upper_point());

    for &w in &[0.0, 0.3, 0.7, 1.0] {
        let cfg = ObjectiveConfig::from_class(&params, &noise, &known, 1.0, w).unwrap();
        let solution = solve_robust(&params, &noise, &known, &cfg, 1.0).unwrap();
        assert!(
            solution.worst_case_value <= 1.0 + 1e-9,
            "w_c = {w}: normalized value {} exceeds 1",
            solution.worst_case_value
        );
        // The optimum dominates both single-task designs, each of which
        // already scores its own weight.
        assert!(solution.worst_case_value + 1e-9 >= w.max(1.0 - w));
        if w == 0.0 || w == 1.0 {
            assert!(
                (solution.worst_case_value - 1.0).abs() <= 1e-9,
                "w_c = {w}: single-task value {} is not 1",
                solution.worst_case_value
            );
        }
    }
}
