//! Brute-force search utilities on the power budget face.
//!
//! These routines provide the independent reference answers that the
//! analytic solvers are checked against: exhaustive enumeration of a
//! lattice on the face `{p >= 0, sum p = budget}`, and an exact
//! greedy-plus-exchange maximiser for *separable concave* objectives on
//! that lattice. They deliberately share no code with the water-filling or
//! robust solvers.
//!
//! Exactness of the fast path: for `f(p) = sum_i g_i(p_i)` with each `g_i`
//! concave, allocating the budget one lattice unit at a time to the
//! greatest marginal gain is a classical exact algorithm, and a point that
//! no single-unit exchange `p + h e_i - h e_j` improves is globally optimal
//! on the lattice (decreasing marginals make the local optimality
//! condition `min used marginal >= max available marginal`, which is the
//! global one). The exchange pass after greedy certifies the result even
//! in the presence of rounding.

/// Visits every lattice point of the face `{p >= 0, sum p = budget}` with
/// `units` subdivisions, i.e. all compositions of `units` into `n` parts
/// scaled by `budget / units`. A zero budget visits the origin once.
pub fn for_each_face_point(n: usize, units: usize, budget: f64, visit: &mut impl FnMut(&[f64])) {
    assert!(n > 0, "need at least one coordinate");
    if budget == 0.0 || units == 0 {
        visit(&vec![0.0; n]);
        return;
    }
    let step = budget / units as f64;
    let mut point = vec![0.0; n];
    fn recurse(
        point: &mut Vec<f64>,
        coord: usize,
        remaining: usize,
        step: f64,
        visit: &mut impl FnMut(&[f64]),
    ) {
        if coord + 1 == point.len() {
            point[coord] = remaining as f64 * step;
            visit(point);
            return;
        }
        for k in 0..=remaining {
            point[coord] = k as f64 * step;
            recurse(point, coord + 1, remaining - k, step, visit);
        }
    }
    recurse(&mut point, 0, units, step, visit);
}

/// Exhaustively maximises an arbitrary function over the face lattice.
/// Returns the best point and value. Intended for small `n`/`units`; the
/// lattice has `C(units + n - 1, n - 1)` points.
pub fn maximize_on_face(
    n: usize,
    budget: f64,
    step: f64,
    f: impl Fn(&[f64]) -> f64,
) -> (Vec<f64>, f64) {
    let units = lattice_units(budget, step);
    let mut best_point = vec![0.0; n];
    let mut best_value = f64::NEG_INFINITY;
    for_each_face_point(n, units, budget, &mut |p| {
        let v = f(p);
        if v > best_value {
            best_value = v;
            best_point.copy_from_slice(p);
        }
    });
    (best_point, best_value)
}

/// Exactly maximises a separable objective `sum_i term(i, p_i)` with
/// concave terms over the face lattice, by greedy unit allocation followed
/// by an exchange-certification pass. Returns the best point and value.
pub fn maximize_separable_on_face(
    n: usize,
    budget: f64,
    step: f64,
    term: impl Fn(usize, f64) -> f64,
) -> (Vec<f64>, f64) {
    assert!(n > 0, "need at least one coordinate");
    let units = lattice_units(budget, step);
    if budget == 0.0 || units == 0 {
        let value = (0..n).map(|i| term(i, 0.0)).sum();
        return (vec![0.0; n], value);
    }
    let h = budget / units as f64;
    let mut counts = vec![0usize; n];
    let mut values: Vec<f64> = (0..n).map(|i| term(i, 0.0)).collect();

    // Greedy: hand out one lattice unit at a time to the best marginal.
    for _ in 0..units {
        let mut best = 0;
        let mut best_gain = f64::NEG_INFINITY;
        for i in 0..n {
            let gain = term(i, (counts[i] + 1) as f64 * h) - values[i];
            if gain > best_gain {
                best_gain = gain;
                best = i;
            }
        }
        counts[best] += 1;
        values[best] = term(best, counts[best] as f64 * h);
    }

    // Certification: apply single-unit exchanges while any improves.
    // Greedy is already exact for concave terms, so this terminates
    // immediately unless rounding produced a marginally better neighbour;
    // the cap guards against cycling on exactly-tied exchanges.
    let mut guard = units * n + 16;
    loop {
        let mut best_gain = 0.0;
        let mut best_pair = None;
        for j in 0..n {
            if counts[j] == 0 {
                continue;
            }
            let drop_gain = term(j, (counts[j] - 1) as f64 * h) - values[j];
            for i in 0..n {
                if i == j {
                    continue;
                }
                let gain = term(i, (counts[i] + 1) as f64 * h) - values[i] + drop_gain;
                if gain > best_gain {
                    best_gain = gain;
                    best_pair = Some((i, j));
                }
            }
        }
        match best_pair {
            Some((i, j)) if guard > 0 => {
                counts[i] += 1;
                counts[j] -= 1;
                values[i] = term(i, counts[i] as f64 * h);
                values[j] = term(j, counts[j] as f64 * h);
                guard -= 1;
            }
            _ => break,
        }
    }

    let point: Vec<f64> = counts.iter().map(|&k| k as f64 * h).collect();
    let value = values.iter().sum();
    (point, value)
}

fn lattice_units(budget: f64, step: f64) -> usize {
    assert!(
        budget.is_finite() && budget >= 0.0,
        "budget must be nonnegative, got {budget}"
    );
    assert!(step.is_finite() && step > 0.0, "step must be positive, got {step}");
    (budget / step).round() as usize
}
