//! Free-space propagation: the Friis law with a configurable path-loss
//! exponent, dBm/watt conversions, and precomputed per-link channel gains.
//!
//! Received power for transmit power `p_t` at distance `d` is
//!
//! p_r = p_t * G_t * G_r * (lambda / 4 pi)^2 * (1 / d)^gamma
//!
//! with the wavelength derived from the carrier frequency. Distances are
//! clamped to `d_min` before use so coincident nodes stay finite. Gains
//! are kept in linear scale; capacity code never touches dB arithmetic.

use crate::scenario::{RadioParams, Scenario};

/// SI-defined speed of light, m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PropagationError {
    #[error("frequency must be positive, got {0} Hz")]
    NonPositiveFrequency(f64),
    #[error("power must be positive for dBm conversion, got {0} W")]
    NonPositivePower(f64),
}

/// Wavelength in meters for a carrier frequency in hertz.
pub fn wavelength(frequency_hz: f64) -> Result<f64, PropagationError> {
    if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
        return Err(PropagationError::NonPositiveFrequency(frequency_hz));
    }
    Ok(SPEED_OF_LIGHT_M_S / frequency_hz)
}

/// Received power in watts at distance `d` for transmit power `p_t`.
///
/// The distance is clamped to `radio.d_min_meters` first, which removes
/// the singularity at d = 0. Zero transmit power yields exactly zero.
pub fn received_power(p_t_watts: f64, radio: &RadioParams, d_meters: f64) -> f64 {
    debug_assert!(p_t_watts >= 0.0, "transmit power must be non-negative");
    let lambda = SPEED_OF_LIGHT_M_S / radio.frequency_hz;
    let d = d_meters.max(radio.d_min_meters);
    let aperture = lambda / (4.0 * std::f64::consts::PI);
    p_t_watts * radio.gain_tx * radio.gain_rx * aperture * aperture * d.powf(-radio.path_loss_exp)
}

/// Converts dBm to watts: `10^((dBm - 30) / 10)`.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Converts watts to dBm. Fails for non-positive power.
pub fn watts_to_dbm(watts: f64) -> Result<f64, PropagationError> {
    if !(watts.is_finite() && watts > 0.0) {
        return Err(PropagationError::NonPositivePower(watts));
    }
    Ok(10.0 * watts.log10() + 30.0)
}

// ---------------------------------------------------------------------------
// Gain matrix
// ---------------------------------------------------------------------------

/// Unit-transmit-power received power for every AP-to-user and
/// AP-to-eavesdropper link, in linear scale.
///
/// `user_gain(n, k)` is the received power at user `k` per watt
/// transmitted by AP `n`; `eve_gain(n, j)` likewise for eavesdropper `j`.
/// Immutable once built; cheap to share across solver threads.
#[derive(Debug, Clone, PartialEq)]
pub struct GainMatrix {
    user_gain: Vec<Vec<f64>>,
    eve_gain: Vec<Vec<f64>>,
}

impl GainMatrix {
    /// Wraps explicit gain tables, e.g. hand-set gains in tests or gains
    /// from an alternative propagation model. All rows must have uniform
    /// length and every entry must be strictly positive and finite.
    pub fn from_gains(
        user_gain: Vec<Vec<f64>>,
        eve_gain: Vec<Vec<f64>>,
    ) -> Result<Self, String> {
        if user_gain.is_empty() {
            return Err("user gain table needs at least one AP row".to_string());
        }
        if user_gain.len() != eve_gain.len() {
            return Err(format!(
                "user table has {} AP rows but eve table has {}",
                user_gain.len(),
                eve_gain.len()
            ));
        }
        let k = user_gain[0].len();
        let j = eve_gain[0].len();
        for (n, row) in user_gain.iter().enumerate() {
            if row.len() != k {
                return Err(format!("user row {n} has ragged length"));
            }
            if row.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
                return Err(format!("user row {n} has a non-positive or non-finite gain"));
            }
        }
        for (n, row) in eve_gain.iter().enumerate() {
            if row.len() != j {
                return Err(format!("eve row {n} has ragged length"));
            }
            if row.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
                return Err(format!("eve row {n} has a non-positive or non-finite gain"));
            }
        }
        Ok(Self { user_gain, eve_gain })
    }

    pub fn n_aps(&self) -> usize {
        self.user_gain.len()
    }

    pub fn n_users(&self) -> usize {
        self.user_gain[0].len()
    }

    pub fn n_eves(&self) -> usize {
        self.eve_gain[0].len()
    }

    #[inline]
    pub fn user_gain(&self, ap: usize, user: usize) -> f64 {
        self.user_gain[ap][user]
    }

    #[inline]
    pub fn eve_gain(&self, ap: usize, eve: usize) -> f64 {
        self.eve_gain[ap][eve]
    }
}

/// Precomputes unit-power gains for every link of a scenario via
/// [`received_power`] at 1 W.
pub fn gain_matrix(scenario: &Scenario) -> GainMatrix {
    let radio = &scenario.radio;
    let user_gain = scenario
        .aps
        .iter()
        .map(|ap| {
            scenario
                .users
                .iter()
                .map(|u| received_power(1.0, radio, ap.distance_to(u)))
                .collect()
        })
        .collect();
    let eve_gain = scenario
        .aps
        .iter()
        .map(|ap| {
            scenario
                .eves
                .iter()
                .map(|e| received_power(1.0, radio, ap.distance_to(e)))
                .collect()
        })
        .collect();
    GainMatrix { user_gain, eve_gain }
}
