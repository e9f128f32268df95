//! Single-step power-allocation environment.
//!
//! A [`PowerEnv`] fixes a scenario, its gain matrix, and a secrecy-aware
//! association, and exposes the sum secrecy capacity as the revenue of a
//! power-allocation action. One action fully determines the revenue and
//! the episode terminates, so solvers treat it as a contextual bandit.

use crate::association::associate_max_secrecy;
use crate::capacity::{sum_secrecy, Association, PowerAllocation};
use crate::propagation::{gain_matrix, GainMatrix};
use crate::scenario::Scenario;

/// Map side used to normalize observations when none is given. Matches
/// the bundled 50 m deployments.
pub const DEFAULT_MAP_SIDE_M: f64 = crate::scenario::BUNDLED_MAP_SIDE_M;

/// Observation grid resolution in meters.
pub const OBSERVATION_CELL_M: f64 = 1.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum EnvError {
    #[error("node at ({x}, {y}) is outside the {side} m map")]
    OutOfMap { x: f64, y: f64, side: f64 },
    #[error("action has {got} entries but the environment has {expected} APs")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gain matrix shape does not match scenario: {0}")]
    ShapeMismatch(String),
}

/// Encodes node positions as the RL state vector.
///
/// Each position snaps to the center of its 1 m x 1 m observation cell,
/// then all coordinates are concatenated (APs, users, eavesdroppers, in
/// list order) and normalized to `[0, 1]` by the map side. Positions
/// anywhere within the same cell produce identical observations.
pub fn encode_observation(scenario: &Scenario, map_side: f64) -> Result<Vec<f64>, EnvError> {
    let cells = (map_side / OBSERVATION_CELL_M).round() as i64;
    let snap = |v: f64| -> f64 {
        let cell = (v / OBSERVATION_CELL_M).floor() as i64;
        let cell = cell.clamp(0, cells - 1);
        (cell as f64 + 0.5) * OBSERVATION_CELL_M
    };
    let mut obs = Vec::with_capacity(2 * (scenario.n_aps() + scenario.n_users() + scenario.n_eves()));
    for p in scenario
        .aps
        .iter()
        .chain(&scenario.users)
        .chain(&scenario.eves)
    {
        if !(0.0..=map_side).contains(&p.x) || !(0.0..=map_side).contains(&p.y) {
            return Err(EnvError::OutOfMap {
                x: p.x,
                y: p.y,
                side: map_side,
            });
        }
        obs.push(snap(p.x) / map_side);
        obs.push(snap(p.y) / map_side);
    }
    Ok(obs)
}

/// The power-optimization environment: scenario, gains, a fixed
/// association, and the encoded observation.
#[derive(Debug, Clone)]
pub struct PowerEnv {
    scenario: Scenario,
    gains: GainMatrix,
    association: Association,
    observation: Vec<f64>,
}

impl PowerEnv {
    /// Builds the environment on the default 50 m map, computing gains
    /// and the secrecy-aware association from the scenario.
    pub fn new(scenario: Scenario) -> Result<Self, EnvError> {
        let gains = gain_matrix(&scenario);
        let association = associate_max_secrecy(&scenario, &gains);
        Self::from_parts(scenario, gains, association, DEFAULT_MAP_SIDE_M)
    }

    /// As [`PowerEnv::new`] but normalizing observations by `map_side`.
    pub fn with_map_side(scenario: Scenario, map_side: f64) -> Result<Self, EnvError> {
        let gains = gain_matrix(&scenario);
        let association = associate_max_secrecy(&scenario, &gains);
        Self::from_parts(scenario, gains, association, map_side)
    }

    /// Builds the environment from an existing gain matrix and
    /// association, e.g. to share one gain computation across runs.
    pub fn from_parts(
        scenario: Scenario,
        gains: GainMatrix,
        association: Association,
        map_side: f64,
    ) -> Result<Self, EnvError> {
        if gains.n_aps() != scenario.n_aps()
            || gains.n_users() != scenario.n_users()
            || gains.n_eves() != scenario.n_eves()
        {
            return Err(EnvError::ShapeMismatch(format!(
                "gains are {}x{}/{} but scenario is {}x{}/{}",
                gains.n_aps(),
                gains.n_users(),
                gains.n_eves(),
                scenario.n_aps(),
                scenario.n_users(),
                scenario.n_eves()
            )));
        }
        if association.n_users() != scenario.n_users() {
            return Err(EnvError::ShapeMismatch(format!(
                "association covers {} users but scenario has {}",
                association.n_users(),
                scenario.n_users()
            )));
        }
        let observation = encode_observation(&scenario, map_side)?;
        Ok(Self {
            scenario,
            gains,
            association,
            observation,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn gains(&self) -> &GainMatrix {
        &self.gains
    }

    pub fn association(&self) -> &Association {
        &self.association
    }

    /// The encoded state vector; constant for a fixed scenario.
    pub fn observation(&self) -> &[f64] {
        &self.observation
    }

    pub fn n_aps(&self) -> usize {
        self.scenario.n_aps()
    }

    pub fn p_max(&self) -> f64 {
        self.scenario.radio.p_max_watts
    }

    /// Revenue of an in-box allocation: the sum secrecy capacity.
    pub fn revenue(&self, p: &PowerAllocation) -> f64 {
        debug_assert_eq!(p.len(), self.n_aps());
        sum_secrecy(&self.gains, p, &self.association, &self.scenario.radio)
    }

    /// Runs one episode: clips the action into `[0, p_max]` (stochastic
    /// policies may overshoot) and returns the revenue. The episode
    /// terminates after this single step.
    pub fn step(&self, action: &[f64]) -> Result<f64, EnvError> {
        if action.len() != self.n_aps() {
            return Err(EnvError::DimensionMismatch {
                expected: self.n_aps(),
                got: action.len(),
            });
        }
        let p_max = self.p_max();
        let clipped_count = action
            .iter()
            .filter(|v| !v.is_finite() || **v < 0.0 || **v > p_max)
            .count();
        if clipped_count > 0 {
            log::warn!(
                "clipped {clipped_count} of {} action entries into [0, {p_max}] W",
                action.len()
            );
        }
        let p = PowerAllocation::clipped(action.to_vec(), p_max);
        Ok(self.revenue(&p))
    }
}
