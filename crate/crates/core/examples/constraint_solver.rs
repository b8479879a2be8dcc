//! The exact order-constraint solver on two small instances: one feasible,
//! and one where an edge map [0,2] -> [0,2] would have to send [1,2] into
//! [0,1] and [0,1] into [1,2] at once.

use std::collections::BTreeMap;

use vh_core::constraints::{check_realizable, verify_heights, Certificate, ConstraintSet, Height, Pair};

fn h(offset: u32, var: usize) -> Height {
    Height { offset, var }
}

fn main() {
    // t0 and t1 enter fan A at faces 1 and 2; t2 leaves fan B at face 1
    let feasible = ConstraintSet {
        num_vars: 3,
        groups: BTreeMap::from([
            (0, vec![Pair { a: h(0, 0), b: h(0, 2) }, Pair { a: h(1, 1), b: h(0, 0) }]),
            (1, vec![Pair { a: h(0, 2), b: h(0, 1) }, Pair { a: h(0, 1), b: h(0, 0) }]),
        ]),
    };
    match check_realizable(&feasible) {
        Certificate::Feasible { heights } => {
            assert!(verify_heights(&feasible, &heights));
            let hs: Vec<String> = heights.iter().map(ToString::to_string).collect();
            println!("feasible, heights {hs:?}");
        }
        Certificate::Infeasible { witness } => println!("unexpected: {witness:?}"),
    }

    let crossing = ConstraintSet {
        num_vars: 4,
        groups: BTreeMap::from([(0, vec![Pair { a: h(1, 0), b: h(0, 1) }, Pair { a: h(0, 2), b: h(1, 3) }])]),
    };
    println!("crossing instance: {:?}", check_realizable(&crossing));
}
