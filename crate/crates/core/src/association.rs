//! User-to-AP association policies and idle-AP power handling.
//!
//! Two policies are implemented. Normal Wi-Fi associates each user with
//! the AP whose signal arrives strongest (equivalently the nearest AP
//! under identical antenna gains); it ignores eavesdroppers entirely.
//! The secrecy-aware policy picks, independently for each user, the AP
//! maximizing the unclamped margin `C_{n,k} - C_e(n)` evaluated with
//! every AP transmitting at full power. Ties break to the lowest AP
//! index in both policies.

use crate::capacity::{max_eve_capacity, user_capacity, Association, PowerAllocation};
use crate::propagation::GainMatrix;
use crate::scenario::Scenario;

/// How non-serving APs behave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdleMode {
    /// Idle APs are silent: no data, no jamming.
    Baseline,
    /// Every AP transmits at full power; idle ones act as jammers.
    Jamming,
}

/// Associates each user with the AP delivering the highest received
/// power at uniform transmit power. Eavesdroppers play no role.
///
/// Received power is used instead of a post-association SINR because the
/// idle-AP powers depend on the association being computed; under equal
/// transmit powers the strongest signal is also the nearest AP.
pub fn associate_strongest_signal(g: &GainMatrix) -> Association {
    let alpha = (0..g.n_users())
        .map(|k| {
            let mut best = 0;
            for n in 1..g.n_aps() {
                if g.user_gain(n, k) > g.user_gain(best, k) {
                    best = n;
                }
            }
            best
        })
        .collect();
    Association::new(alpha, g.n_aps()).expect("argmax indices are in range")
}

/// Associates each user with the AP maximizing `C_{n,k} - C_e(n)` under
/// uniform full power on every AP.
///
/// The margin is deliberately unclamped: when every candidate AP yields
/// negative secrecy the least-bad AP is still selected.
pub fn associate_max_secrecy(scenario: &Scenario, g: &GainMatrix) -> Association {
    let radio = &scenario.radio;
    let uniform = PowerAllocation::uniform(g.n_aps(), radio.p_max_watts);
    let eve_worst: Vec<f64> = (0..g.n_aps())
        .map(|n| max_eve_capacity(g, &uniform, n, radio))
        .collect();
    let alpha = (0..g.n_users())
        .map(|k| {
            let mut best = 0;
            let mut best_margin = f64::NEG_INFINITY;
            for n in 0..g.n_aps() {
                let margin = user_capacity(g, &uniform, n, k, radio) - eve_worst[n];
                if margin > best_margin {
                    best_margin = margin;
                    best = n;
                }
            }
            best
        })
        .collect();
    Association::new(alpha, g.n_aps()).expect("argmax indices are in range")
}

/// Transmit powers implied by an association and an idle-AP mode:
/// serving APs always run at `p_max`; idle APs are silent in
/// [`IdleMode::Baseline`] and jam at `p_max` in [`IdleMode::Jamming`].
pub fn idle_ap_powers(
    a: &Association,
    n_aps: usize,
    mode: IdleMode,
    p_max: f64,
) -> PowerAllocation {
    let p = (0..n_aps)
        .map(|n| match mode {
            IdleMode::Jamming => p_max,
            IdleMode::Baseline => {
                if a.serves(n) {
                    p_max
                } else {
                    0.0
                }
            }
        })
        .collect();
    PowerAllocation::new(p, p_max).expect("powers are 0 or p_max")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::eve_capacity;
    use crate::propagation::gain_matrix;
    use crate::scenario::{Position, RadioParams, Scenario};

    fn radio() -> RadioParams {
        RadioParams::wifi_default()
    }

    #[test]
    fn tie_breaks_to_lowest_index() {
        // Six APs; the user is equidistant from APs 2 and 5 (1-based) and
        // farther from the rest, so the tie resolves to AP 2 (index 1).
        let user = Position::new(25.0, 25.0);
        let aps = vec![
            Position::new(0.0, 0.0),
            Position::new(25.0, 35.0),
            Position::new(50.0, 0.0),
            Position::new(0.0, 50.0),
            Position::new(25.0, 15.0),
            Position::new(50.0, 50.0),
        ];
        let s = Scenario::new("tie", radio(), aps, vec![user], vec![]).unwrap();
        let g = gain_matrix(&s);
        let a = associate_strongest_signal(&g);
        assert_eq!(a.serving_ap(0), 1);
    }

    #[test]
    fn single_ap_serves_everyone() {
        let s = Scenario::new(
            "one",
            radio(),
            vec![Position::new(25.0, 25.0)],
            vec![Position::new(1.0, 1.0), Position::new(49.0, 49.0)],
            vec![],
        )
        .unwrap();
        let a = associate_strongest_signal(&gain_matrix(&s));
        assert_eq!(a.as_slice(), &[0, 0]);
    }

    #[test]
    fn user_on_ap_position_takes_that_ap() {
        let s = Scenario::new(
            "onap",
            radio(),
            vec![Position::new(10.0, 10.0), Position::new(40.0, 40.0)],
            vec![Position::new(40.0, 40.0)],
            vec![],
        )
        .unwrap();
        let a = associate_strongest_signal(&gain_matrix(&s));
        assert_eq!(a.serving_ap(0), 1);
    }

    #[test]
    fn no_eves_reduces_max_secrecy_to_strongest_signal() {
        let s = Scenario::new(
            "noeves",
            radio(),
            vec![
                Position::new(5.0, 5.0),
                Position::new(45.0, 5.0),
                Position::new(25.0, 45.0),
            ],
            vec![
                Position::new(10.0, 10.0),
                Position::new(40.0, 10.0),
                Position::new(25.0, 40.0),
                Position::new(30.0, 25.0),
            ],
            vec![],
        )
        .unwrap();
        let g = gain_matrix(&s);
        assert_eq!(
            associate_max_secrecy(&s, &g),
            associate_strongest_signal(&g)
        );
    }

    #[test]
    fn avoids_ap_with_colocated_eve() {
        // The user sits between two APs, slightly nearer the first; an
        // eavesdropper on top of the first AP makes it a terrible choice.
        let s = Scenario::new(
            "eveonap",
            radio(),
            vec![Position::new(10.0, 25.0), Position::new(42.0, 25.0)],
            vec![Position::new(24.0, 25.0)],
            vec![Position::new(10.0, 25.0)],
        )
        .unwrap();
        let g = gain_matrix(&s);
        assert_eq!(associate_strongest_signal(&g).serving_ap(0), 0);

        // Brute-force the margin over both APs to confirm the argmax.
        let uniform = PowerAllocation::uniform(2, s.radio.p_max_watts);
        let margins: Vec<f64> = (0..2)
            .map(|n| {
                user_capacity(&g, &uniform, n, 0, &s.radio)
                    - max_eve_capacity(&g, &uniform, n, &s.radio)
            })
            .collect();
        assert!(margins[1] > margins[0]);
        assert_eq!(associate_max_secrecy(&s, &g).serving_ap(0), 1);
    }

    #[test]
    fn matches_strongest_signal_when_users_dominate_eves() {
        // Every user far closer than every eavesdropper to its strongest
        // AP, as in the second bundled deployment.
        let s = Scenario::new(
            "user-dominant",
            radio(),
            vec![Position::new(10.0, 10.0), Position::new(40.0, 40.0)],
            vec![Position::new(11.0, 11.0), Position::new(39.0, 39.0)],
            vec![Position::new(25.0, 2.0), Position::new(2.0, 25.0)],
        )
        .unwrap();
        let g = gain_matrix(&s);
        assert_eq!(
            associate_max_secrecy(&s, &g),
            associate_strongest_signal(&g)
        );
    }

    #[test]
    fn max_secrecy_satisfies_argmax_dominance() {
        let s = Scenario::new(
            "dom",
            radio(),
            vec![
                Position::new(8.0, 8.0),
                Position::new(42.0, 8.0),
                Position::new(25.0, 42.0),
                Position::new(25.0, 20.0),
            ],
            vec![
                Position::new(12.0, 14.0),
                Position::new(38.0, 12.0),
                Position::new(24.0, 33.0),
            ],
            vec![Position::new(20.0, 25.0), Position::new(40.0, 30.0)],
        )
        .unwrap();
        let g = gain_matrix(&s);
        let a = associate_max_secrecy(&s, &g);
        let uniform = PowerAllocation::uniform(s.n_aps(), s.radio.p_max_watts);
        let eve_worst: Vec<f64> = (0..s.n_aps())
            .map(|n| max_eve_capacity(&g, &uniform, n, &s.radio))
            .collect();
        for k in 0..s.n_users() {
            let chosen =
                user_capacity(&g, &uniform, a.serving_ap(k), k, &s.radio) - eve_worst[a.serving_ap(k)];
            for n in 0..s.n_aps() {
                let margin = user_capacity(&g, &uniform, n, k, &s.radio) - eve_worst[n];
                assert!(
                    chosen >= margin,
                    "user {k}: AP {} margin {margin} beats chosen {chosen}",
                    n + 1
                );
            }
        }
    }

    #[test]
    fn scaling_gains_and_noise_together_preserves_associations() {
        let s = Scenario::new(
            "scale",
            radio(),
            vec![Position::new(5.0, 25.0), Position::new(45.0, 25.0)],
            vec![Position::new(20.0, 25.0), Position::new(30.0, 25.0)],
            vec![Position::new(25.0, 40.0)],
        )
        .unwrap();
        let g = gain_matrix(&s);
        let c = 7.5;
        let scaled_user: Vec<Vec<f64>> = (0..s.n_aps())
            .map(|n| (0..s.n_users()).map(|k| c * g.user_gain(n, k)).collect())
            .collect();
        let scaled_eve: Vec<Vec<f64>> = (0..s.n_aps())
            .map(|n| (0..s.n_eves()).map(|j| c * g.eve_gain(n, j)).collect())
            .collect();
        let g_scaled = GainMatrix::from_gains(scaled_user, scaled_eve).unwrap();
        let mut s_scaled = s.clone();
        s_scaled.radio.noise_watts *= c;

        assert_eq!(
            associate_strongest_signal(&g),
            associate_strongest_signal(&g_scaled)
        );
        assert_eq!(
            associate_max_secrecy(&s, &g),
            associate_max_secrecy(&s_scaled, &g_scaled)
        );
    }

    #[test]
    fn idle_powers_follow_mode() {
        let a = Association::new(vec![0, 2], 4).unwrap();
        let baseline = idle_ap_powers(&a, 4, IdleMode::Baseline, 1.0);
        assert_eq!(baseline.as_slice(), &[1.0, 0.0, 1.0, 0.0]);
        let jamming = idle_ap_powers(&a, 4, IdleMode::Jamming, 1.0);
        assert_eq!(jamming.as_slice(), &[1.0, 1.0, 1.0, 1.0]);

        // Every AP serving someone: the two modes coincide.
        let full = Association::new(vec![0, 1], 2).unwrap();
        assert_eq!(
            idle_ap_powers(&full, 2, IdleMode::Baseline, 1.0),
            idle_ap_powers(&full, 2, IdleMode::Jamming, 1.0)
        );
    }

    #[test]
    fn permuting_users_permutes_association() {
        let radio = radio();
        let aps = vec![Position::new(5.0, 5.0), Position::new(45.0, 45.0)];
        let u1 = Position::new(10.0, 10.0);
        let u2 = Position::new(40.0, 40.0);
        let eves = vec![Position::new(25.0, 25.0)];
        let fwd = Scenario::new("f", radio.clone(), aps.clone(), vec![u1, u2], eves.clone()).unwrap();
        let rev = Scenario::new("r", radio, aps, vec![u2, u1], eves).unwrap();
        let af = associate_max_secrecy(&fwd, &gain_matrix(&fwd));
        let ar = associate_max_secrecy(&rev, &gain_matrix(&rev));
        assert_eq!(af.serving_ap(0), ar.serving_ap(1));
        assert_eq!(af.serving_ap(1), ar.serving_ap(0));
    }
}
