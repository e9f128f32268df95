//! Network scenarios: node geometry plus radio parameters.
//!
//! A scenario fixes the access points, legitimate users, and eavesdroppers
//! on a flat map together with the radio constants that drive propagation
//! and capacity. Scenarios come from three sources: JSON files on disk,
//! the six bundled deployments, and a seeded random generator. Every path
//! runs the same validation, so a `Scenario` in hand always satisfies the
//! type invariants.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Side length of the bundled deployment map in meters.
pub const BUNDLED_MAP_SIDE_M: f64 = 50.0;

/// Number of bundled scenarios.
pub const NUM_BUILTIN_SCENARIOS: u32 = 6;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// A 2D node position in meters. Serialized as an `[x, y]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Euclidean distance to another position, in meters.
    pub fn distance_to(&self, other: &Position) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

impl From<[f64; 2]> for Position {
    fn from(p: [f64; 2]) -> Self {
        Self { x: p[0], y: p[1] }
    }
}

impl From<Position> for [f64; 2] {
    fn from(p: Position) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Physical constants of a deployment.
///
/// `noise_watts` is shared by users and eavesdroppers. `d_min_meters`
/// clamps link distances before the path-loss law is applied so that
/// coincident nodes keep received power finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioParams {
    /// Carrier frequency in hertz.
    pub frequency_hz: f64,
    /// Transmitter antenna gain, linear.
    pub gain_tx: f64,
    /// Receiver antenna gain, linear.
    pub gain_rx: f64,
    /// Path-loss exponent.
    pub path_loss_exp: f64,
    /// Noise power at every node, watts.
    pub noise_watts: f64,
    /// Channel bandwidth in hertz.
    pub bandwidth_hz: f64,
    /// Per-AP transmit power cap, watts.
    pub p_max_watts: f64,
    /// Minimum link distance in meters; shorter links are clamped up.
    pub d_min_meters: f64,
}

impl RadioParams {
    /// The 2.4 GHz Wi-Fi defaults used by the bundled scenarios:
    /// unity antenna gains, exponent 2, -85 dBm noise, 1 Hz bandwidth
    /// (capacities then read as bps/Hz), 1 W power cap.
    pub fn wifi_default() -> Self {
        Self {
            frequency_hz: 2.4e9,
            gain_tx: 1.0,
            gain_rx: 1.0,
            path_loss_exp: 2.0,
            noise_watts: 3.16e-12,
            bandwidth_hz: 1.0,
            p_max_watts: 1.0,
            d_min_meters: 0.1,
        }
    }

    fn collect_violations(&self, out: &mut Vec<String>) {
        let mut check = |ok: bool, msg: &str| {
            if !ok {
                out.push(msg.to_string());
            }
        };
        check(
            self.frequency_hz.is_finite() && self.frequency_hz > 0.0,
            "frequency_hz > 0",
        );
        check(self.gain_tx.is_finite() && self.gain_tx > 0.0, "gain_tx > 0");
        check(self.gain_rx.is_finite() && self.gain_rx > 0.0, "gain_rx > 0");
        check(
            self.path_loss_exp.is_finite() && self.path_loss_exp >= 1.0,
            "path_loss_exp >= 1",
        );
        check(
            self.noise_watts.is_finite() && self.noise_watts > 0.0,
            "noise_watts > 0",
        );
        check(
            self.bandwidth_hz.is_finite() && self.bandwidth_hz > 0.0,
            "bandwidth_hz > 0",
        );
        check(
            self.p_max_watts.is_finite() && self.p_max_watts > 0.0,
            "p_max_watts > 0",
        );
        check(
            self.d_min_meters.is_finite() && self.d_min_meters > 0.0,
            "d_min_meters > 0",
        );
    }
}

impl Default for RadioParams {
    fn default() -> Self {
        Self::wifi_default()
    }
}

/// A validated network deployment: AP, user, and eavesdropper positions
/// plus radio parameters. Node order is meaningful; indices into the
/// lists are stable identities (0-based internally, 1-based in reports).
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub radio: RadioParams,
    pub aps: Vec<Position>,
    pub users: Vec<Position>,
    pub eves: Vec<Position>,
}

impl Scenario {
    /// Builds a scenario, failing with the full list of violated
    /// invariants if any check fails.
    pub fn new(
        name: impl Into<String>,
        radio: RadioParams,
        aps: Vec<Position>,
        users: Vec<Position>,
        eves: Vec<Position>,
    ) -> Result<Self, ScenarioError> {
        let s = Self {
            name: name.into(),
            radio,
            aps,
            users,
            eves,
        };
        s.validate()?;
        Ok(s)
    }

    /// Number of APs.
    pub fn n_aps(&self) -> usize {
        self.aps.len()
    }

    /// Number of users.
    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    /// Number of eavesdroppers.
    pub fn n_eves(&self) -> usize {
        self.eves.len()
    }

    /// Checks every invariant and reports all violations, not only the first.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut violations = Vec::new();
        if self.aps.is_empty() {
            violations.push("n_aps >= 1".to_string());
        }
        if self.users.is_empty() {
            violations.push("n_users >= 1".to_string());
        }
        self.radio.collect_violations(&mut violations);
        for (label, list) in [
            ("ap", &self.aps),
            ("user", &self.users),
            ("eve", &self.eves),
        ] {
            for (i, p) in list.iter().enumerate() {
                if !(p.x.is_finite() && p.y.is_finite()) {
                    violations.push(format!("{} {} has non-finite coordinates", label, i + 1));
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ScenarioError::Validation { violations })
        }
    }
}

/// Parameters for random scenario generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub n_aps: usize,
    pub n_users: usize,
    pub n_eves: usize,
    pub map_side_meters: f64,
    pub radio: RadioParams,
}

impl RandomSpec {
    fn validate(&self) -> Result<(), ScenarioError> {
        let mut violations = Vec::new();
        if self.n_aps < 1 {
            violations.push("n_aps >= 1".to_string());
        }
        if self.n_users < 1 {
            violations.push("n_users >= 1".to_string());
        }
        if !(self.map_side_meters.is_finite() && self.map_side_meters > 0.0) {
            violations.push("map_side_meters > 0".to_string());
        }
        self.radio.collect_violations(&mut violations);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ScenarioError::Validation { violations })
        }
    }
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read scenario file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed scenario file {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid scenario: {}", violations.join("; "))]
    Validation { violations: Vec<String> },
    #[error("builtin scenario id {0} out of range 1..={NUM_BUILTIN_SCENARIOS}")]
    BuiltinId(u32),
}

// ---------------------------------------------------------------------------
// Loading, saving, bundled scenarios
// ---------------------------------------------------------------------------

/// Loads and validates a scenario from a UTF-8 JSON file.
///
/// The format is strict: unknown fields are rejected so that typos in a
/// hand-edited file fail loudly. Node ordering in the file is preserved.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let scenario: Scenario =
        serde_json::from_str(&text).map_err(|source| ScenarioError::Parse {
            path: path.display().to_string(),
            source,
        })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Writes a scenario as pretty-printed JSON. Positions round-trip
/// bit-identically through [`load_scenario`].
pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(scenario).expect("scenario is always serializable");
    std::fs::write(path, text).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })
}

const BUILTIN_FILES: [&str; NUM_BUILTIN_SCENARIOS as usize] = [
    include_str!("../data/scenario1.json"),
    include_str!("../data/scenario2.json"),
    include_str!("../data/scenario3.json"),
    include_str!("../data/scenario4.json"),
    include_str!("../data/scenario5.json"),
    include_str!("../data/scenario6.json"),
];

/// Returns one of the six bundled 50 m x 50 m deployments (`id` in 1..=6).
///
/// AP counts are 4, 5, 5, 7, 9, and 13. Scenarios 3 through 6 share the
/// same users and eavesdroppers; each later scenario only appends APs to
/// the previous one's list. Coordinates live in versioned data files so
/// they can be refined without touching code.
pub fn builtin_scenario(id: u32) -> Result<Scenario, ScenarioError> {
    if !(1..=NUM_BUILTIN_SCENARIOS).contains(&id) {
        return Err(ScenarioError::BuiltinId(id));
    }
    let scenario: Scenario = serde_json::from_str(BUILTIN_FILES[(id - 1) as usize])
        .unwrap_or_else(|e| panic!("bundled scenario {} is malformed: {}", id, e));
    scenario.validate()?;
    Ok(scenario)
}

/// Generates a random scenario deterministically from `(spec, seed)`.
///
/// Users and eavesdroppers are uniform over the map. APs sit on a
/// jittered sqrt-grid so they cover the whole area: with `m = ceil(sqrt(n_aps))`
/// cells per side, the jitter is bounded so that any two APs stay at
/// least `map_side / (m + 1)` apart.
pub fn generate_random_scenario(spec: &RandomSpec, seed: u64) -> Result<Scenario, ScenarioError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = spec.map_side_meters;

    let m = (spec.n_aps as f64).sqrt().ceil() as usize;
    let cell = side / m as f64;
    // Per-coordinate jitter bound: displacement <= sqrt(2)*j, so pairwise
    // distance stays >= cell - 2*sqrt(2)*j >= side/(m+1).
    let j = side / (4.0 * (m * (m + 1)) as f64);
    let mut aps = Vec::with_capacity(spec.n_aps);
    for i in 0..spec.n_aps {
        let cx = ((i % m) as f64 + 0.5) * cell;
        let cy = ((i / m) as f64 + 0.5) * cell;
        let x = (cx + rng.gen_range(-j..=j)).clamp(0.0, side);
        let y = (cy + rng.gen_range(-j..=j)).clamp(0.0, side);
        aps.push(Position::new(x, y));
    }

    let mut uniform_nodes = |count: usize| -> Vec<Position> {
        (0..count)
            .map(|_| Position::new(rng.gen_range(0.0..=side), rng.gen_range(0.0..=side)))
            .collect()
    };
    let users = uniform_nodes(spec.n_users);
    let eves = uniform_nodes(spec.n_eves);

    Scenario::new(
        format!("random-{seed}"),
        spec.radio.clone(),
        aps,
        users,
        eves,
    )
}
