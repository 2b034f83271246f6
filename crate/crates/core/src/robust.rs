//! Minimax-robust power allocation over response uncertainty classes.
//!
//! Both information metrics increase componentwise in the squared response
//! samples, so over an interval class the least favourable response is the
//! componentwise lower bound. The robust design therefore maximises the
//! joint criterion at the lower-bound CNRs, and that inner problem has a
//! closed-form KKT solution per subcarrier: with per-nat coefficients
//! `a = radar_coeff`, `b = comm_coeff`, inverse CNRs `x = 1/nu_m`,
//! `y = 1/w_m`, and multiplier `u` (the reciprocal of the Lagrange
//! multiplier of the budget constraint),
//!
//! ```text
//! p_m(u) = 0.5 * [ u*(a + b) - (x + y)
//!                  + sqrt( ((y - x) + u*(a - b))^2 + 4 u^2 a b ) ]^+
//! ```
//!
//! Each `p_m(u)` is nondecreasing in `u`, so the budget equation
//! `sum_m p_m(u) = budget` is solved by bisection; the start interval comes
//! from the multiplier at which the worst subcarrier alone would absorb a
//! unit budget, doubled as needed for larger budgets.
//!
//! The remaining routines verify the solution independently: scaled KKT
//! residuals, sampled two-sided saddle-point checks, a closed-form
//! certificate for when the unit-budget optimum concentrates on a single
//! subcarrier, and a brute-force confirmation that concentrating power on
//! a subcarrier that is jointly worst for both tasks minimises the joint
//! criterion over the whole budget face.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::metrics::{joint_criterion_raw, ObjectiveConfig, PowerAllocation};
use crate::ofdm::{cnr_from_response, CnrProfile, NoiseModel, OfdmParams, UncertaintyClass};
use crate::simplex;
use crate::tol;

/// Inverse CNRs for both tasks; the natural coordinates of the closed-form
/// solution.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseCnrs {
    /// `1 / radar_cnr_m` per subcarrier.
    pub radar: Vec<f64>,
    /// `1 / comm_cnr_m` per subcarrier.
    pub comm: Vec<f64>,
}

impl InverseCnrs {
    /// Inverts a CNR profile (entries are positive by construction).
    pub fn from_cnr(cnr: &CnrProfile) -> Self {
        InverseCnrs {
            radar: cnr.radar.iter().map(|&c| 1.0 / c).collect(),
            comm: cnr.comm.iter().map(|&c| 1.0 / c).collect(),
        }
    }

    /// Inverse CNRs at the class lower bounds — the robust problem's
    /// effective channel.
    pub fn from_class_lower(
        params: &OfdmParams,
        noise: &NoiseModel,
        class: &UncertaintyClass,
    ) -> Result<Self> {
        let cnr = cnr_from_response(params, noise, &class.lower_point())?;
        Ok(InverseCnrs::from_cnr(&cnr))
    }

    /// Number of subcarriers.
    pub fn len(&self) -> usize {
        self.radar.len()
    }

    /// Whether the profile is empty (never true for constructed values).
    pub fn is_empty(&self) -> bool {
        self.radar.is_empty()
    }
}

/// Outcome of a robust solve.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustSolution {
    /// The minimax-optimal allocation.
    pub allocation: PowerAllocation,
    /// Reciprocal Lagrange multiplier `u` at which the closed form meets
    /// the budget.
    pub multiplier: f64,
    /// Joint criterion at the allocation and the lower-bound CNRs — the
    /// guaranteed (worst-case) score.
    pub worst_case_value: f64,
    /// Scaled KKT residual of the returned solution; at most
    /// [`tol::ROBUST_KKT`].
    pub kkt_residual: f64,
}

/// Evaluates the closed-form optimal powers for a given multiplier.
///
/// Monotone nondecreasing in `multiplier` componentwise; identically zero
/// at `multiplier = 0`. With one of the coefficients zero the expression
/// collapses exactly to the single-task water-filling rule
/// `[u * coeff - inverse_cnr]^+` (the square root becomes an absolute
/// value, which the max against zero resolves).
pub fn closed_form_power(multiplier: f64, inv: &InverseCnrs, cfg: &ObjectiveConfig) -> Vec<f64> {
    let a = cfg.radar_coeff();
    let b = cfg.comm_coeff();
    inv.radar
        .iter()
        .zip(&inv.comm)
        .map(|(&x, &y)| {
            let s = (y - x) + multiplier * (a - b);
            let disc = s * s + 4.0 * multiplier * multiplier * a * b;
            let p = 0.5 * (multiplier * (a + b) - (x + y) + disc.sqrt());
            p.max(0.0)
        })
        .collect()
}

/// Solves the robust design problem for an uncertainty class: maximises the
/// joint criterion at the class's lower-bound CNRs subject to the power
/// budget.
pub fn solve_robust(
    params: &OfdmParams,
    noise: &NoiseModel,
    class: &UncertaintyClass,
    cfg: &ObjectiveConfig,
    budget: f64,
) -> Result<RobustSolution> {
    let cnr = cnr_from_response(params, noise, &class.lower_point())?;
    solve_robust_from_cnr(params, &cnr, cfg, budget)
}

/// Solves the robust design problem directly from the worst-case CNR
/// profile. `params` fixes the expected grid size.
pub fn solve_robust_from_cnr(
    params: &OfdmParams,
    cnr_lower: &CnrProfile,
    cfg: &ObjectiveConfig,
    budget: f64,
) -> Result<RobustSolution> {
    let n = params.n_subcarriers();
    check_len("radar cnr", &cnr_lower.radar, n)?;
    check_len("comm cnr", &cnr_lower.comm, n)?;
    if !(budget.is_finite() && budget > 0.0) {
        return Err(Error::domain(format!(
            "budget must be positive and finite, got {budget}"
        )));
    }
    if cfg.radar_coeff() + cfg.comm_coeff() <= 0.0 {
        return Err(Error::domain(
            "joint criterion is identically zero: both coefficients vanish".to_string(),
        ));
    }
    let inv = InverseCnrs::from_cnr(cnr_lower);

    // Multiplier at which the worst single subcarrier would absorb a unit
    // budget; above it the total certainly exceeds 1, so it brackets any
    // budget <= 1. Larger budgets double the cap until bracketed.
    let unit_cap = inv
        .radar
        .iter()
        .zip(&inv.comm)
        .map(|(&x, &y)| cfg.radar_coeff() / (x + 1.0) + cfg.comm_coeff() / (y + 1.0))
        .fold(f64::INFINITY, f64::min);
    let mut hi = 1.0 / unit_cap;
    let spent = |u: f64| closed_form_power(u, &inv, cfg).iter().sum::<f64>();
    let mut doublings = 0;
    while spent(hi) < budget {
        hi *= 2.0;
        doublings += 1;
        if doublings > tol::BISECTION_MAX_ITERS {
            return Err(Error::Convergence(format!(
                "could not bracket the multiplier for budget {budget}"
            )));
        }
    }

    let mut lo = 0.0;
    let mut solution = None;
    for _ in 0..tol::BISECTION_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        let total = spent(mid);
        if (total - budget).abs() <= tol::BUDGET_GAP {
            solution = Some(mid);
            break;
        }
        if total > budget {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let multiplier = solution.ok_or_else(|| {
        Error::Convergence(format!(
            "budget equation not solved to {} within {} bisection steps",
            tol::BUDGET_GAP,
            tol::BISECTION_MAX_ITERS
        ))
    })?;

    let powers = closed_form_power(multiplier, &inv, cfg);
    let allocation = PowerAllocation::new(powers, budget)?;
    let kkt = kkt_residual(&allocation, multiplier, &inv, cfg, budget)?;
    if kkt > tol::ROBUST_KKT {
        return Err(Error::Convergence(format!(
            "KKT residual {kkt} exceeds tolerance {}",
            tol::ROBUST_KKT
        )));
    }
    let worst_case_value = joint_criterion_raw(
        allocation.powers(),
        &cnr_lower.radar,
        &cnr_lower.comm,
        cfg.radar_coeff(),
        cfg.comm_coeff(),
    );
    Ok(RobustSolution {
        allocation,
        multiplier,
        worst_case_value,
        kkt_residual: kkt,
    })
}

/// Maximum KKT violation of an (allocation, multiplier) pair, scaled by the
/// Lagrange multiplier `1/multiplier`:
///
/// * active subcarriers: stationarity
///   `|1/u - a/(x + p_m) - b/(y + p_m)|`;
/// * inactive subcarriers: dual feasibility `[a/x + b/y - 1/u]^+`;
/// * the budget gap `|sum p - budget|`.
///
/// A correct solution scores at most [`tol::ROBUST_KKT`]; perturbing an
/// optimal allocation by swapping power between subcarriers with unequal
/// CNRs raises the residual by orders of magnitude.
pub fn kkt_residual(
    allocation: &PowerAllocation,
    multiplier: f64,
    inv: &InverseCnrs,
    cfg: &ObjectiveConfig,
    budget: f64,
) -> Result<f64> {
    if !(multiplier.is_finite() && multiplier > 0.0) {
        return Err(Error::domain(format!(
            "multiplier must be positive and finite, got {multiplier}"
        )));
    }
    check_len("inverse comm cnr", &inv.comm, inv.radar.len())?;
    check_len("allocation", allocation.powers(), inv.radar.len())?;
    let a = cfg.radar_coeff();
    let b = cfg.comm_coeff();
    let mu = 1.0 / multiplier;
    let mut worst = (allocation.total() - budget).abs();
    for ((&p, &x), &y) in allocation.powers().iter().zip(&inv.radar).zip(&inv.comm) {
        let r = if p > 0.0 {
            (mu - a / (x + p) - b / (y + p)).abs()
        } else {
            (a / x + b / y - mu).max(0.0)
        };
        worst = worst.max(r);
    }
    Ok(worst / mu)
}

/// Report of a sampled two-sided saddle-point check.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddlePointReport {
    /// Number of response samples and of allocation samples.
    pub n_samples: usize,
    /// Smallest observed `I(p*, rho) - I(p*, lower)` over sampled
    /// responses `rho`; the saddle property requires it nonnegative.
    pub min_response_margin: f64,
    /// Smallest observed `I(p*, lower) - I(q, lower)` over sampled
    /// allocations `q`; the saddle property requires it nonnegative.
    pub min_allocation_margin: f64,
    /// Samples violating either inequality beyond the slack.
    pub violations: usize,
    /// True when no violation exceeded [`tol::SADDLE_SLACK`].
    pub passed: bool,
}

/// Verifies by sampling that the robust solution is a saddle point of the
/// joint criterion over (allocation, response) pairs: the solution's
/// worst-case value separates `I(p*, rho)` from above over responses in
/// the class and `I(q, lower)` from below over feasible allocations.
///
/// Responses are drawn componentwise-uniformly from the class; allocations
/// are drawn uniformly on the budget face (symmetric Dirichlet via
/// exponential spacings, scaled to the budget). Fully deterministic for a
/// given seed: responses are drawn first, then allocations.
pub fn verify_saddle_point(
    params: &OfdmParams,
    noise: &NoiseModel,
    class: &UncertaintyClass,
    cfg: &ObjectiveConfig,
    solution: &RobustSolution,
    n_samples: usize,
    seed: u64,
) -> Result<SaddlePointReport> {
    let n = params.n_subcarriers();
    if class.n_subcarriers() != n {
        return Err(Error::Dimension {
            what: "class",
            expected: n,
            got: class.n_subcarriers(),
        });
    }
    check_len("allocation", solution.allocation.powers(), n)?;
    let budget = solution.allocation.budget();
    let lower = cnr_from_response(params, noise, &class.lower_point())?;
    let a = cfg.radar_coeff();
    let b = cfg.comm_coeff();
    let pivot = joint_criterion_raw(
        solution.allocation.powers(),
        &lower.radar,
        &lower.comm,
        a,
        b,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_response_margin = f64::INFINITY;
    let mut min_allocation_margin = f64::INFINITY;
    let mut violations = 0;

    for _ in 0..n_samples {
        let point = class.sample(&mut rng);
        let cnr = cnr_from_response(params, noise, &point)?;
        let value = joint_criterion_raw(
            solution.allocation.powers(),
            &cnr.radar,
            &cnr.comm,
            a,
            b,
        );
        let margin = value - pivot;
        min_response_margin = min_response_margin.min(margin);
        if margin < -tol::SADDLE_SLACK {
            violations += 1;
        }
    }

    let mut q = vec![0.0; n];
    for _ in 0..n_samples {
        // Exponential spacings normalised to the budget: uniform on the face.
        let mut total = 0.0;
        for slot in q.iter_mut() {
            let e = -(1.0 - rng.gen::<f64>()).ln();
            *slot = e;
            total += e;
        }
        if total <= 0.0 {
            q.fill(budget / n as f64);
        } else {
            for slot in q.iter_mut() {
                *slot *= budget / total;
            }
        }
        let value = joint_criterion_raw(&q, &lower.radar, &lower.comm, a, b);
        let margin = pivot - value;
        min_allocation_margin = min_allocation_margin.min(margin);
        if margin < -tol::SADDLE_SLACK {
            violations += 1;
        }
    }

    if n_samples == 0 {
        min_response_margin = 0.0;
        min_allocation_margin = 0.0;
    }
    Ok(SaddlePointReport {
        n_samples,
        min_response_margin,
        min_allocation_margin,
        violations,
        passed: violations == 0,
    })
}

/// Closed-form certificate that the optimal allocation for a **unit**
/// budget concentrates all power on subcarrier `target`: every other
/// subcarrier's marginal value at zero power, `a/x_m + b/y_m`, must not
/// exceed `target`'s marginal value after absorbing the whole budget,
/// `a/(1 + x_t) + b/(1 + y_t)`.
///
/// This is exactly the KKT optimality condition of the concentrated
/// allocation, so when it returns true [`solve_robust_from_cnr`] with
/// budget 1 places the entire budget on `target` (up to the budget
/// tolerance). It quantifies "one subcarrier is so much better than the
/// rest that spreading power is never worthwhile"; vacuously true with a
/// single subcarrier.
pub fn worst_allocation_condition(
    inv: &InverseCnrs,
    cfg: &ObjectiveConfig,
    target: usize,
) -> Result<bool> {
    let n = inv.len();
    if target >= n {
        return Err(Error::domain(format!(
            "subcarrier index {target} out of range for {n} subcarriers"
        )));
    }
    let a = cfg.radar_coeff();
    let b = cfg.comm_coeff();
    let rhs = a / (1.0 + inv.radar[target]) + b / (1.0 + inv.comm[target]);
    let lhs = (0..n)
        .filter(|&m| m != target)
        .map(|m| a / inv.radar[m] + b / inv.comm[m])
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(lhs <= rhs)
}

/// Report of the brute-force worst-allocation check.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstAllocationReport {
    /// The jointly worst subcarrier the concentrated allocation uses.
    pub minimizer: usize,
    /// Lattice points compared against.
    pub grid_points: usize,
    /// Largest observed `I(concentrated) - I(grid point)`; nonpositive when
    /// the concentrated allocation is indeed least favourable.
    pub max_violation: f64,
    /// True when `max_violation` is within [`tol::WORST_ALLOCATION_SLACK`].
    pub passed: bool,
}

/// Brute-force check that concentrating the entire budget on a jointly
/// worst subcarrier minimises the joint criterion among all allocations on
/// the budget face.
///
/// Requires a subcarrier whose radar *and* comm CNRs are componentwise
/// minimal (domain error otherwise) and at most 4 subcarriers so the face
/// enumeration stays tractable.
pub fn verify_worst_allocation(
    cnr: &CnrProfile,
    cfg: &ObjectiveConfig,
    budget: f64,
    grid_step: f64,
) -> Result<WorstAllocationReport> {
    let n = cnr.len();
    if n > 4 {
        return Err(Error::domain(format!(
            "face enumeration supports at most 4 subcarriers, got {n}"
        )));
    }
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::domain(format!(
            "budget must be nonnegative and finite, got {budget}"
        )));
    }
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(Error::domain(format!(
            "grid_step must be positive and finite, got {grid_step}"
        )));
    }
    let minimizer = (0..n)
        .find(|&i| {
            (0..n).all(|j| cnr.radar[i] <= cnr.radar[j] && cnr.comm[i] <= cnr.comm[j])
        })
        .ok_or_else(|| {
            Error::domain(
                "no subcarrier is jointly worst for both tasks; the concentration \
                 result does not apply"
                    .to_string(),
            )
        })?;

    let a = cfg.radar_coeff();
    let b = cfg.comm_coeff();
    let value = |p: &[f64]| joint_criterion_raw(p, &cnr.radar, &cnr.comm, a, b);
    let mut concentrated = vec![0.0; n];
    concentrated[minimizer] = budget;
    let pivot = value(&concentrated);

    let units = (budget / grid_step).round() as usize;
    let mut grid_points = 0;
    let mut max_violation = f64::NEG_INFINITY;
    simplex::for_each_face_point(n, units, budget, &mut |p| {
        grid_points += 1;
        let diff = pivot - value(p);
        if diff > max_violation {
            max_violation = diff;
        }
    });

    Ok(WorstAllocationReport {
        minimizer,
        grid_points,
        max_violation,
        passed: max_violation <= tol::WORST_ALLOCATION_SLACK,
    })
}
