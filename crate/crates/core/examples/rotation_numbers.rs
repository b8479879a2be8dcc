//! Exact PL circle lifts and rotation-number brackets.

use vh_core::holonomy::{rotation_bounds, CircleLift, PLMap};
use vh_core::rational::{fmt_q, q, qi, to_f64};

fn show((lo, hi): (vh_core::rational::Q, vh_core::rational::Q)) -> String {
    format!("[{}, {}]", fmt_q(&lo), fmt_q(&hi))
}

fn main() -> anyhow::Result<()> {
    println!("identity: {}", show(rotation_bounds(&CircleLift::identity(), 4)?));
    println!("rotation by 2/5: {}", show(rotation_bounds(&CircleLift::rotation(q(2, 5)), 5)?));

    // translation by 1/10 near the ends, with 1/2 sent back to 1/5
    let bent = CircleLift::new(PLMap::new(vec![(qi(0), q(1, 10)), (q(1, 2), q(1, 5)), (qi(1), q(11, 10))])?)?;
    // it has a fixed point, so the brackets shrink towards 0
    for n in [1, 4, 16, 64] {
        let (lo, hi) = rotation_bounds(&bent, n)?;
        println!("bent lift, n = {n:>2}: [{:.6}, {:.6}]", to_f64(&lo), to_f64(&hi));
    }
    let twice = bent.compose(&bent)?;
    println!("composite has {} breakpoints", twice.period().points().len());
    Ok(())
}
