//! Physical-layer security simulation and optimization for multi-AP
//! Wi-Fi networks with cooperative friendly jamming.
//!
//! The crate models a set of access points serving users on a shared
//! band while passive eavesdroppers listen. Non-serving APs can jam to
//! degrade the eavesdroppers' channels. It computes per-user wiretap
//! secrecy capacities under a Friis path-loss model and searches for the
//! transmit-power allocation maximizing the network's sum secrecy
//! capacity, with three interchangeable solvers: an exhaustive grid
//! oracle, the cross-entropy method, and a soft actor-critic agent.
//!
//! Modules, bottom-up:
//!
//! - [`scenario`]: node geometry, radio constants, file I/O, bundled and
//!   random deployments.
//! - [`propagation`]: the path-loss law and per-link gain precomputation.
//! - [`capacity`]: SINR, Shannon and secrecy capacities, metric reports.
//! - [`association`]: user-to-AP selection policies and idle-AP powers.
//! - [`optimizer`]: the single-step power environment and the three
//!   solvers.
//! - [`harness`]: the three reference implementations, comparison runs,
//!   and CSV/table report emission.

pub mod association;
pub mod capacity;
pub mod harness;
pub mod optimizer;
pub mod propagation;
pub mod scenario;

pub use association::{associate_max_secrecy, associate_strongest_signal, idle_ap_powers, IdleMode};
pub use capacity::{Association, PowerAllocation, SecrecyReport};
pub use harness::{
    emit_report, render_report, run_comparison, run_normal_wifi, run_rl_cfj, run_smart_ap,
    ComparisonReport, HarnessError, Implementation, ImplementationResult, ReportFormat,
    SolverKind, SolverMeta,
};
pub use optimizer::{
    cem_optimize, grid_search_oracle, sac_train, CemConfig, PowerEnv, Policy, SacConfig,
    SolverConfig, SolverError,
};
pub use propagation::{gain_matrix, GainMatrix};
pub use scenario::{
    builtin_scenario, generate_random_scenario, load_scenario, save_scenario, Position,
    RadioParams, RandomSpec, Scenario, ScenarioError,
};
