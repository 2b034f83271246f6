//! Numerical tolerances guaranteed by the solvers and enforced by the
//! verification routines.
//!
//! Every tolerance that appears in a solver contract or a verification
//! report lives here so that library code, the CLI verifier, and the test
//! suites agree on a single source of truth. Each constant documents why
//! its magnitude is attainable.

/// Water-filling optimality conditions hold to this absolute tolerance.
/// The allocation comes from a finite closed-form procedure (sort, prefix
/// sums, one division), so only a few rounding errors accumulate and 1e-9
/// is very conservative.
pub const WATERFILL_KKT: f64 = 1e-9;

/// Budget equality `|sum(p) - budget|` enforced by the robust solver's
/// bisection. The allocation-vs-multiplier map is Lipschitz with a modest
/// constant, so 200 bisection steps reach this comfortably.
pub const BUDGET_GAP: f64 = 1e-10;

/// Maximum scaled stationarity/complementarity residual accepted for a
/// robust solution. Active powers satisfy their stationarity equation by
/// construction (they solve the per-subcarrier quadratic exactly), so the
/// residual is dominated by the budget gap and rounding.
pub const ROBUST_KKT: f64 = 1e-7;

/// Slack allowed when verifying the two saddle-point inequalities by
/// sampling; absorbs rounding in sums of ~10^2 logarithm terms.
pub const SADDLE_SLACK: f64 = 1e-9;

/// Slack for componentwise-monotonicity checks of the information metrics
/// between class bounds.
pub const MONOTONICITY_SLACK: f64 = 1e-9;

/// Slack for grid comparisons against the concentrated worst-case
/// allocation; the comparison is between two direct evaluations of the same
/// smooth expression, so near machine precision is attainable.
pub const WORST_ALLOCATION_SLACK: f64 = 1e-12;

/// Largest per-subcarrier relative cross-term error accepted when the
/// diagonal approximation of the expected power spectrum is checked on a
/// design grid with a guard interval of a quarter elementary duration.
pub const SPECTRAL_CROSS_TERM_MAX: f64 = 0.15;

/// Iteration cap for the robust solver's bisection. The bracket shrinks by
/// half per step, so 200 iterations exhaust f64 resolution many times over;
/// hitting the cap indicates a genuine defect rather than slow convergence.
pub const BISECTION_MAX_ITERS: usize = 200;

/// Radar/comm weights must sum to one within this tolerance.
pub const WEIGHT_SUM: f64 = 1e-12;

/// Allocations may overshoot their budget by at most this much; covers
/// rounding when solvers reconstruct `sum(p)` from a water level.
pub const BUDGET_OVERSHOOT: f64 = 1e-9;

/// Communications code symbols must have unit magnitude within this
/// tolerance; generators produce them from exact sine/cosine pairs.
pub const UNIT_MODULUS: f64 = 1e-9;
