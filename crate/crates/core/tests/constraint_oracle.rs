mod support;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vh_core::constraints::{check_realizable, verify_heights, Certificate};

use support::{brute_force_feasible, random_instance};

#[test]
fn solver_matches_exhaustive_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut feasible, mut infeasible) = (0, 0);
    for i in 0..1500 {
        let cs = random_instance(&mut rng, 7, 4);
        let expected = brute_force_feasible(&cs);
        match check_realizable(&cs) {
            Certificate::Feasible { heights } => {
                assert!(expected, "instance {i}: solver feasible, oracle not: {cs:?}");
                assert!(verify_heights(&cs, &heights), "instance {i}: heights fail");
                feasible += 1;
            }
            Certificate::Infeasible { witness } => {
                assert!(!expected, "instance {i}: solver infeasible ({witness:?}), oracle feasible: {cs:?}");
                infeasible += 1;
            }
        }
    }
    // both outcomes must be well represented for the comparison to mean anything
    assert!(feasible > 200 && infeasible > 200, "{feasible} feasible / {infeasible} infeasible");
}
