// Scratch probe for SAC quality vs the grid oracle. Not part of the
// deliverable; removed before finalizing.

use cfj_core::optimizer::{grid_search_oracle, sac_train, PowerEnv, SacConfig};
use cfj_core::scenario::{generate_random_scenario, Position, RadioParams, RandomSpec, Scenario};

fn main() {
    let t0 = std::time::Instant::now();

    let n1_env = {
        let radio = RadioParams {
            noise_watts: 1e-6,
            ..RadioParams::wifi_default()
        };
        let s = Scenario::new(
            "n1-good",
            radio,
            vec![Position::new(20.0, 25.0)],
            vec![Position::new(22.0, 25.0)],
            vec![Position::new(30.0, 25.0)],
        )
        .unwrap();
        PowerEnv::new(s).unwrap()
    };

    let seed4_env = {
        let spec = RandomSpec {
            n_aps: 3,
            n_users: 2,
            n_eves: 2,
            map_side_meters: 50.0,
            radio: RadioParams::wifi_default(),
        };
        PowerEnv::new(generate_random_scenario(&spec, 104).unwrap()).unwrap()
    };
    let (_, seed4_grid) = grid_search_oracle(&seed4_env, 0.05).unwrap();

    let variants: Vec<(&str, SacConfig)> = vec![
        (
            "default-30k",
            SacConfig {
                train_episodes: 30000,
                ..SacConfig::default()
            },
        ),
        (
            "target2N-15k",
            SacConfig {
                train_episodes: 15000,
                entropy_target: Some(-6.0),
                ..SacConfig::default()
            },
        ),
        (
            "target3N-15k",
            SacConfig {
                train_episodes: 15000,
                entropy_target: Some(-9.0),
                ..SacConfig::default()
            },
        ),
    ];

    for (name, cfg) in &variants {
        let mut n1_cfg = cfg.clone();
        if let Some(t) = cfg.entropy_target {
            n1_cfg.entropy_target = Some(t / 3.0); // per-dim scaled for N=1
        }
        for seed in 0..3 {
            let out = sac_train(&n1_env, &n1_cfg, seed).unwrap();
            let act = out.policy.act_deterministic(n1_env.observation()).unwrap();
            println!(
                "[{:.0?}] {name} N=1 seed {seed}: power={:.4}",
                t0.elapsed(),
                act.get(0)
            );
        }
        for seed in [4u64, 7, 9] {
            let out = sac_train(&seed4_env, cfg, seed).unwrap();
            println!(
                "[{:.0?}] {name} 3AP(seed4-scenario) train-seed {seed}: sac={:.4} ({:.3}x of grid {:.4})",
                t0.elapsed(),
                out.eval_revenue,
                out.eval_revenue / seed4_grid,
                seed4_grid
            );
        }
    }
}
