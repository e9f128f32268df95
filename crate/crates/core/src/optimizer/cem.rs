//! Cross-entropy method over the power box.
//!
//! Gradient-free baseline: sample a population from an axis-aligned
//! Gaussian, evaluate each candidate clamped into the box (truncated
//! sampling), refit mean and standard deviation on the elite fraction,
//! repeat. The refit happens in the unclamped space so a distribution
//! sitting on a box corner keeps its spread instead of collapsing onto
//! the clamp, and the refit std is blended with the previous one to
//! avoid premature convergence. The mean starts at uniform `p_max` and
//! is evaluated up front, so the returned revenue can never fall below
//! the all-jammers warm start. Fully deterministic given the seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::capacity::PowerAllocation;

use super::env::PowerEnv;
use super::SolverError;

/// Cross-entropy method parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CemConfig {
    /// Candidates sampled per iteration.
    pub population: usize,
    /// Fraction of the population kept as elites each iteration.
    pub elite_fraction: f64,
    /// Number of sample/refit iterations.
    pub iterations: usize,
    /// Initial per-dimension standard deviation in watts.
    pub init_std: f64,
}

impl Default for CemConfig {
    fn default() -> Self {
        Self {
            population: 128,
            elite_fraction: 0.125,
            iterations: 80,
            init_std: 0.5,
        }
    }
}

impl CemConfig {
    fn validate(&self) -> Result<(), SolverError> {
        if self.population < 1 {
            return Err(SolverError::InvalidConfig("population >= 1".to_string()));
        }
        if !(self.elite_fraction > 0.0 && self.elite_fraction <= 1.0) {
            return Err(SolverError::InvalidConfig(
                "elite_fraction in (0, 1]".to_string(),
            ));
        }
        if self.iterations < 1 {
            return Err(SolverError::InvalidConfig("iterations >= 1".to_string()));
        }
        if !(self.init_std.is_finite() && self.init_std > 0.0) {
            return Err(SolverError::InvalidConfig("init_std > 0".to_string()));
        }
        Ok(())
    }
}

/// Result of a cross-entropy run, including the best revenue seen after
/// each iteration (non-decreasing by construction).
#[derive(Debug, Clone)]
pub struct CemOutcome {
    pub powers: PowerAllocation,
    pub revenue: f64,
    pub best_per_iteration: Vec<f64>,
}

const STD_FLOOR: f64 = 1e-6;
/// Weight of the freshly refit std against the previous one.
const STD_BLEND: f64 = 0.7;

/// Runs the cross-entropy method on a power environment.
pub fn cem_optimize(
    env: &PowerEnv,
    config: &CemConfig,
    seed: u64,
) -> Result<CemOutcome, SolverError> {
    config.validate()?;
    let n = env.n_aps();
    let p_max = env.p_max();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let n_elite = ((config.population as f64 * config.elite_fraction).round() as usize)
        .clamp(1, config.population);

    // Sampling distribution lives in unclamped space; candidates are
    // evaluated through the clamp.
    let mut mean = vec![p_max; n];
    let mut std = vec![config.init_std; n];

    // The initial mean (uniform p_max) is always evaluated.
    let mut best = PowerAllocation::uniform(n, p_max);
    let mut best_rev = env.revenue(&best);

    let mut best_per_iteration = Vec::with_capacity(config.iterations);
    let mut samples: Vec<(Vec<f64>, f64)> = Vec::with_capacity(config.population);

    let mut consider = |candidate: &PowerAllocation, rev: f64, best: &mut PowerAllocation, best_rev: &mut f64| {
        if rev > *best_rev {
            *best_rev = rev;
            *best = candidate.clone();
        }
    };

    for _ in 0..config.iterations {
        samples.clear();
        for _ in 0..config.population {
            let raw: Vec<f64> = (0..n)
                .map(|d| {
                    Normal::new(mean[d], std[d].max(STD_FLOOR))
                        .expect("std is positive and finite")
                        .sample(&mut rng)
                })
                .collect();
            let p = PowerAllocation::clipped(raw.clone(), p_max);
            let rev = env.revenue(&p);
            consider(&p, rev, &mut best, &mut best_rev);
            samples.push((raw, rev));
        }
        // The current mean itself is also a candidate.
        let mean_alloc = PowerAllocation::clipped(mean.clone(), p_max);
        let mean_rev = env.revenue(&mean_alloc);
        consider(&mean_alloc, mean_rev, &mut best, &mut best_rev);

        best_per_iteration.push(best_rev);

        // Refit on the elite fraction (stable sort keeps ties deterministic);
        // the refit uses the unclamped samples.
        samples.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("revenues are finite"));
        let elites = &samples[..n_elite.min(samples.len())];
        for d in 0..n {
            let m = elites.iter().map(|(c, _)| c[d]).sum::<f64>() / elites.len() as f64;
            let var = elites
                .iter()
                .map(|(c, _)| (c[d] - m).powi(2))
                .sum::<f64>()
                / elites.len() as f64;
            mean[d] = m;
            std[d] = (STD_BLEND * var.sqrt() + (1.0 - STD_BLEND) * std[d]).max(STD_FLOOR);
        }
    }

    Ok(CemOutcome {
        powers: best,
        revenue: best_rev,
        best_per_iteration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::grid::grid_search_oracle;
    use crate::scenario::{Position, RadioParams, Scenario};

    fn small_env() -> PowerEnv {
        let scenario = Scenario::new(
            "cem",
            RadioParams::wifi_default(),
            vec![Position::new(10.0, 25.0), Position::new(40.0, 25.0)],
            vec![Position::new(14.0, 25.0)],
            vec![Position::new(18.0, 30.0)],
        )
        .unwrap();
        PowerEnv::new(scenario).unwrap()
    }

    #[test]
    fn never_worse_than_warm_start() {
        let env = small_env();
        let uniform_rev = env
            .revenue(&PowerAllocation::uniform(env.n_aps(), env.p_max()));
        let out = cem_optimize(&env, &CemConfig::default(), 3).unwrap();
        assert!(out.revenue >= uniform_rev);
    }

    #[test]
    fn deterministic_under_fixed_seed() {
        let env = small_env();
        let a = cem_optimize(&env, &CemConfig::default(), 11).unwrap();
        let b = cem_optimize(&env, &CemConfig::default(), 11).unwrap();
        assert_eq!(a.powers, b.powers);
        assert_eq!(a.revenue, b.revenue);
        assert_eq!(a.best_per_iteration, b.best_per_iteration);
    }

    #[test]
    fn best_ever_is_monotone() {
        let env = small_env();
        let out = cem_optimize(&env, &CemConfig::default(), 5).unwrap();
        for w in out.best_per_iteration.windows(2) {
            assert!(w[1] >= w[0]);
        }
        assert_eq!(*out.best_per_iteration.last().unwrap(), out.revenue);
    }

    #[test]
    fn single_ap_matches_grid_within_step() {
        let scenario = Scenario::new(
            "n1",
            RadioParams::wifi_default(),
            vec![Position::new(25.0, 25.0)],
            vec![Position::new(27.0, 25.0)],
            vec![Position::new(35.0, 25.0)],
        )
        .unwrap();
        let env = PowerEnv::new(scenario).unwrap();
        let step = 0.05;
        let (gp, grev) = grid_search_oracle(&env, step).unwrap();
        let out = cem_optimize(&env, &CemConfig::default(), 1).unwrap();
        assert!((out.powers.get(0) - gp.get(0)).abs() <= step);
        assert!(out.revenue >= grev - 1e-9);
    }

    #[test]
    fn outputs_stay_in_box() {
        let env = small_env();
        let out = cem_optimize(&env, &CemConfig::default(), 9).unwrap();
        for &v in out.powers.as_slice() {
            assert!((0.0..=env.p_max()).contains(&v));
        }
    }

    #[test]
    fn config_validation() {
        let env = small_env();
        let bad = CemConfig {
            elite_fraction: 0.0,
            ..CemConfig::default()
        };
        assert!(matches!(
            cem_optimize(&env, &bad, 0),
            Err(SolverError::InvalidConfig(_))
        ));
    }
}
