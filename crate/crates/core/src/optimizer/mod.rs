//! Power-allocation solvers over a common single-step environment.
//!
//! Three solvers target the same objective, the sum secrecy capacity
//! over the box `[0, p_max]^N`: an exhaustive grid oracle for ground
//! truth at small `N`, a cross-entropy baseline, and a soft actor-critic
//! agent. Every solver is a pure function of `(environment, config,
//! seed)` and returns allocations that satisfy the box constraint
//! exactly.

pub mod cem;
pub mod env;
pub mod grid;
mod nn;
pub mod sac;

pub use cem::{cem_optimize, CemConfig, CemOutcome};
pub use env::{encode_observation, EnvError, PowerEnv, DEFAULT_MAP_SIDE_M, OBSERVATION_CELL_M};
pub use grid::{grid_search_oracle, grid_search_oracle_with_budget, DEFAULT_GRID_EVAL_BUDGET};
pub use sac::{sac_train, Policy, SacConfig, SacOutcome, TrainingRecord};

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("grid needs {required} evaluations, over the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("invalid solver config: {0}")]
    InvalidConfig(String),
    #[error("non-finite loss at episode {episode}: {detail}")]
    NonFiniteLoss { episode: usize, detail: String },
    #[error("state vector has {got} entries, policy expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Env(#[from] EnvError),
}

/// Bundled configuration for all three solvers plus the run seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Lattice spacing for the grid oracle, watts.
    pub grid_step_watts: f64,
    pub cem: CemConfig,
    pub sac: SacConfig,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid_step_watts: 0.05,
            cem: CemConfig::default(),
            sac: SacConfig::default(),
            seed: 0,
        }
    }
}
