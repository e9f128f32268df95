//! Exhaustive lattice search over the power box.
//!
//! Evaluates every point of `{0, step, 2*step, ..., p_max}^N` and returns
//! the revenue maximizer. Intractable beyond small `N`, which is the
//! point: it is the ground truth the other solvers are validated against.

use rayon::prelude::*;

use crate::capacity::PowerAllocation;

use super::env::PowerEnv;
use super::SolverError;

/// Default cap on lattice evaluations.
pub const DEFAULT_GRID_EVAL_BUDGET: u64 = 100_000_000;

/// Exhaustive search with the default evaluation budget.
pub fn grid_search_oracle(
    env: &PowerEnv,
    grid_step_watts: f64,
) -> Result<(PowerAllocation, f64), SolverError> {
    grid_search_oracle_with_budget(env, grid_step_watts, DEFAULT_GRID_EVAL_BUDGET)
}

/// Exhaustive search over the lattice `{0, step, ..., p_max}^N`.
///
/// On revenue ties the lexicographically smallest allocation wins, so the
/// result is deterministic even under parallel evaluation. Errors out
/// before evaluating anything if the lattice exceeds `budget` points,
/// naming the budget that would be required.
pub fn grid_search_oracle_with_budget(
    env: &PowerEnv,
    grid_step_watts: f64,
    budget: u64,
) -> Result<(PowerAllocation, f64), SolverError> {
    if !(grid_step_watts.is_finite() && grid_step_watts > 0.0) {
        return Err(SolverError::InvalidConfig(format!(
            "grid step must be positive, got {grid_step_watts}"
        )));
    }
    let p_max = env.p_max();
    let n = env.n_aps();

    // Multiples of the step up to p_max; p_max itself always present.
    let mut levels: Vec<f64> = Vec::new();
    let m = (p_max / grid_step_watts + 1e-9).floor() as u64;
    for i in 0..=m {
        levels.push((i as f64 * grid_step_watts).min(p_max));
    }
    if *levels.last().unwrap() < p_max {
        levels.push(p_max);
    }

    let per_dim = levels.len() as u64;
    let total = (per_dim as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(SolverError::BudgetExceeded {
            required: total,
            budget,
        });
    }
    let total = total as u64;

    // Decode a flat index into an allocation, most-significant digit
    // first, so ascending indices are ascending lexicographic order.
    let decode = |idx: u64| -> Vec<f64> {
        let mut digits = vec![0.0; n];
        let mut rest = idx;
        for d in (0..n).rev() {
            digits[d] = levels[(rest % per_dim) as usize];
            rest /= per_dim;
        }
        digits
    };

    let (best_rev, best_idx) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let p = PowerAllocation::new(decode(idx), p_max).expect("lattice points are in-box");
            (env.revenue(&p), idx)
        })
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |a, b| {
                // Higher revenue wins; exact ties go to the lower index,
                // i.e. the lexicographically smaller allocation.
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let best = PowerAllocation::new(decode(best_idx), p_max).expect("lattice points are in-box");
    Ok((best, best_rev))
}
