// Scratch validation of the bundled scenarios against the qualitative
// acceptance orderings, across several CEM seeds. Not part of the
// deliverable; removed before finalizing.

use cfj_core::harness::{run_comparison, SolverKind};
use cfj_core::optimizer::SolverConfig;
use cfj_core::scenario::builtin_scenario;

fn main() {
    for seed in [7u64, 0, 1, 2, 3] {
        let config = SolverConfig {
            seed,
            ..SolverConfig::default()
        };
        println!("=== seed {seed} ===");
        let mut rl = Vec::new();
        for id in 1..=6u32 {
            let s = builtin_scenario(id).unwrap();
            let r = run_comparison(&s, SolverKind::Cem, &config).unwrap();
            let (n, sm, rlr) = (
                &r.normal_wifi.report,
                &r.smart_ap.report,
                &r.rl_cfj.report,
            );
            println!(
                "s{id}: normal {:.3}/{:.0}% eve {:.2} | smart {:.3}/{:.0}% eve {:.2} | rl {:.3}/{:.0}% eve {:.2} | rl-sm {:+.3} rl-n {:+.3}",
                n.sum_secrecy, n.secrecy_ratio, n.sum_eve_capacity,
                sm.sum_secrecy, sm.secrecy_ratio, sm.sum_eve_capacity,
                rlr.sum_secrecy, rlr.secrecy_ratio, rlr.sum_eve_capacity,
                rlr.sum_secrecy - sm.sum_secrecy,
                rlr.sum_secrecy - n.sum_secrecy,
            );
            rl.push(rlr.sum_secrecy);
        }
        println!(
            "s4-s3 {:+.3} | s6-s3 {:+.3} | s5-s4 {:+.3}",
            rl[3] - rl[2],
            rl[5] - rl[2],
            rl[4] - rl[3]
        );
    }
}
