//! SINRs, Shannon capacities, worst-case eavesdropper capacities, and
//! clamped secrecy capacities.
//!
//! The downlink capacity from AP `n` to user `k` is
//!
//! C_{n,k} = W * log2(1 + p_n * g_{n,k} / (sum_{v != n} p_v * g_{v,k} + N))
//!
//! with every other AP counted as interference, whether it is serving
//! data or jamming. The eavesdropper capacity is the same expression on
//! eavesdropper gains, the worst case per AP takes the max over
//! eavesdroppers, and the secrecy capacity of a user is the clamped
//! difference `[C_user - C_eve_worst]+`. All logs are base 2, all
//! arithmetic stays in linear scale and double precision.

use crate::propagation::GainMatrix;
use crate::scenario::{RadioParams, Scenario};

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Per-AP transmit powers in watts, boxed to `[0, p_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    p: Vec<f64>,
}

impl PowerAllocation {
    /// Wraps a power vector, rejecting entries outside `[0, p_max]` or
    /// non-finite values.
    pub fn new(p: Vec<f64>, p_max: f64) -> Result<Self, String> {
        for (n, &v) in p.iter().enumerate() {
            if !v.is_finite() || v < 0.0 || v > p_max {
                return Err(format!(
                    "power for AP {} is {} W, outside [0, {}]",
                    n + 1,
                    v,
                    p_max
                ));
            }
        }
        Ok(Self { p })
    }

    /// Wraps a power vector, clamping each entry into `[0, p_max]`.
    /// Non-finite entries become 0.
    pub fn clipped(p: Vec<f64>, p_max: f64) -> Self {
        let p = p
            .into_iter()
            .map(|v| if v.is_finite() { v.clamp(0.0, p_max) } else { 0.0 })
            .collect();
        Self { p }
    }

    /// All APs at the same power level.
    pub fn uniform(n_aps: usize, watts: f64) -> Self {
        Self {
            p: vec![watts; n_aps],
        }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    #[inline]
    pub fn get(&self, ap: usize) -> f64 {
        self.p[ap]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }
}

/// Serving-AP index for each user, 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Association {
    alpha: Vec<usize>,
}

impl Association {
    pub fn new(alpha: Vec<usize>, n_aps: usize) -> Result<Self, String> {
        for (k, &a) in alpha.iter().enumerate() {
            if a >= n_aps {
                return Err(format!(
                    "user {} associated with AP index {} but only {} APs exist",
                    k + 1,
                    a,
                    n_aps
                ));
            }
        }
        Ok(Self { alpha })
    }

    pub fn n_users(&self) -> usize {
        self.alpha.len()
    }

    /// Serving-AP index for user `k`.
    #[inline]
    pub fn serving_ap(&self, user: usize) -> usize {
        self.alpha[user]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.alpha
    }

    /// True if at least one user is served by AP `ap`.
    pub fn serves(&self, ap: usize) -> bool {
        self.alpha.iter().any(|&a| a == ap)
    }
}

/// Per-user and per-AP capacity breakdown plus the three summary metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct SecrecyReport {
    /// Shannon capacity of each user on its serving AP, bits/s.
    pub user_capacity: Vec<f64>,
    /// Worst-case eavesdropper capacity on each AP's transmission, bits/s.
    pub eve_worst_per_ap: Vec<f64>,
    /// Clamped secrecy capacity of each user, bits/s.
    pub user_secrecy: Vec<f64>,
    /// Sum of user secrecy capacities, bits/s.
    pub sum_secrecy: f64,
    /// Sum over eavesdroppers of each one's best capacity across the
    /// users' serving APs, bits/s.
    pub sum_eve_capacity: f64,
    /// Percentage of users with strictly positive secrecy capacity.
    pub secrecy_ratio: f64,
}

// ---------------------------------------------------------------------------
// Capacity operations
// ---------------------------------------------------------------------------

#[inline]
fn shannon(bandwidth_hz: f64, sinr: f64) -> f64 {
    bandwidth_hz * (1.0 + sinr).log2()
}

/// Shannon capacity of the downlink from AP `n` to user `k` in bits/s.
/// Every AP other than `n` contributes interference.
pub fn user_capacity(
    g: &GainMatrix,
    p: &PowerAllocation,
    n: usize,
    k: usize,
    radio: &RadioParams,
) -> f64 {
    assert!(n < g.n_aps(), "AP index {n} out of range");
    assert!(k < g.n_users(), "user index {k} out of range");
    assert_eq!(p.len(), g.n_aps(), "allocation length != AP count");
    let signal = p.get(n) * g.user_gain(n, k);
    let mut interference = 0.0;
    for v in 0..g.n_aps() {
        if v != n {
            interference += p.get(v) * g.user_gain(v, k);
        }
    }
    shannon(radio.bandwidth_hz, signal / (interference + radio.noise_watts))
}

/// Shannon capacity of the channel from AP `n` to eavesdropper `j` in
/// bits/s, with all other APs jamming.
pub fn eve_capacity(
    g: &GainMatrix,
    p: &PowerAllocation,
    n: usize,
    j: usize,
    radio: &RadioParams,
) -> f64 {
    assert!(n < g.n_aps(), "AP index {n} out of range");
    assert!(j < g.n_eves(), "eve index {j} out of range");
    assert_eq!(p.len(), g.n_aps(), "allocation length != AP count");
    let signal = p.get(n) * g.eve_gain(n, j);
    let mut interference = 0.0;
    for v in 0..g.n_aps() {
        if v != n {
            interference += p.get(v) * g.eve_gain(v, j);
        }
    }
    shannon(radio.bandwidth_hz, signal / (interference + radio.noise_watts))
}

/// Worst-case (maximum) eavesdropper capacity on AP `n`'s transmission.
/// Zero when there are no eavesdroppers.
pub fn max_eve_capacity(g: &GainMatrix, p: &PowerAllocation, n: usize, radio: &RadioParams) -> f64 {
    (0..g.n_eves())
        .map(|j| eve_capacity(g, p, n, j, radio))
        .fold(0.0, f64::max)
}

/// Clamped secrecy capacity of user `k` served by AP `alpha_k`:
/// `max(C_user - C_eve_worst, 0)`.
pub fn secrecy_capacity(
    g: &GainMatrix,
    p: &PowerAllocation,
    k: usize,
    alpha_k: usize,
    radio: &RadioParams,
) -> f64 {
    (user_capacity(g, p, alpha_k, k, radio) - max_eve_capacity(g, p, alpha_k, radio)).max(0.0)
}

/// Sum of secrecy capacities over all users. This is the optimization
/// objective and the RL revenue.
pub fn sum_secrecy(
    g: &GainMatrix,
    p: &PowerAllocation,
    a: &Association,
    radio: &RadioParams,
) -> f64 {
    (0..a.n_users())
        .map(|k| secrecy_capacity(g, p, k, a.serving_ap(k), radio))
        .sum()
}

/// Full capacity breakdown for one (allocation, association) pair.
///
/// The eavesdropper sum counts, for each eavesdropper, its best capacity
/// across the serving APs actually in use; the secrecy ratio is the
/// percentage of users with strictly positive secrecy.
pub fn report(
    scenario: &Scenario,
    g: &GainMatrix,
    p: &PowerAllocation,
    a: &Association,
) -> SecrecyReport {
    let radio = &scenario.radio;
    let n_users = a.n_users();
    assert_eq!(n_users, g.n_users(), "association/users mismatch");

    let user_capacity_v: Vec<f64> = (0..n_users)
        .map(|k| user_capacity(g, p, a.serving_ap(k), k, radio))
        .collect();
    let eve_worst_per_ap: Vec<f64> = (0..g.n_aps())
        .map(|n| max_eve_capacity(g, p, n, radio))
        .collect();
    let user_secrecy: Vec<f64> = (0..n_users)
        .map(|k| (user_capacity_v[k] - eve_worst_per_ap[a.serving_ap(k)]).max(0.0))
        .collect();
    let sum_secrecy: f64 = user_secrecy.iter().sum();
    let sum_eve_capacity: f64 = (0..g.n_eves())
        .map(|j| {
            (0..n_users)
                .map(|k| eve_capacity(g, p, a.serving_ap(k), j, radio))
                .fold(0.0, f64::max)
        })
        .sum();
    let positive = user_secrecy.iter().filter(|&&s| s > 0.0).count();
    let secrecy_ratio = 100.0 * positive as f64 / n_users as f64;

    SecrecyReport {
        user_capacity: user_capacity_v,
        eve_worst_per_ap,
        user_secrecy,
        sum_secrecy,
        sum_eve_capacity,
        secrecy_ratio,
    }
}
