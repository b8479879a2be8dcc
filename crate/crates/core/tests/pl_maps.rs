mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vh_core::holonomy::{rotation_bounds, CircleLift, PLMap};
use vh_core::rational::{q, qi, Q};

/// Increasing map [0, n] -> [0, m] with interior breakpoints on a 1/8 grid.
fn pl_map(n: i64, m: i64) -> impl Strategy<Value = PLMap> {
    (
        proptest::collection::btree_set(1..8 * n, 0..4),
        proptest::collection::btree_set(1..8 * m, 0..4),
    )
        .prop_map(move |(xs, ys)| {
            let pairs: Vec<(Q, Q)> = xs.iter().zip(ys.iter()).map(|(&x, &y)| (q(x, 8), q(y, 8))).collect();
            PLMap::through(n, m, &pairs).unwrap()
        })
}

fn point(n: i64) -> impl Strategy<Value = Q> {
    (0..=64 * n).prop_map(|k| q(k, 64))
}

proptest! {
    #[test]
    fn maps_are_increasing(f in pl_map(3, 5), x in point(3), y in point(3)) {
        let (fx, fy) = (f.evaluate(&x).unwrap(), f.evaluate(&y).unwrap());
        prop_assert_eq!(x.cmp(&y), fx.cmp(&fy));
    }

    #[test]
    fn inverse_undoes_map(f in pl_map(4, 2), x in point(4)) {
        let g = f.invert();
        prop_assert_eq!(g.evaluate(&f.evaluate(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn composition_evaluates_pointwise(f in pl_map(2, 5), g in pl_map(3, 2), x in point(3)) {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.evaluate(&x).unwrap(), f.evaluate(&g.evaluate(&x).unwrap()).unwrap());
    }

    #[test]
    fn composition_is_associative(f in pl_map(2, 4), g in pl_map(3, 2), h in pl_map(5, 3)) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn map_composed_with_inverse_is_identity(f in pl_map(3, 4)) {
        prop_assert_eq!(f.compose(&f.invert()).unwrap(), PLMap::identity(4));
    }

    #[test]
    fn lifts_commute_with_integer_translation(seed in any::<u64>(), k in -3i64..3, x in point(1)) {
        let f = support::random_lift(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        prop_assert_eq!(f.evaluate(&(&x + qi(k))), f.evaluate(&x) + qi(k));
    }

    #[test]
    fn power_matches_repeated_composition(seed in any::<u64>(), n in 1u32..6) {
        let f = support::random_lift(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let mut acc = CircleLift::identity();
        for _ in 0..n {
            acc = f.compose(&acc).unwrap();
        }
        prop_assert_eq!(f.power(n).unwrap(), acc);
    }

    /// Brackets for n and 2n nest and both hold the long-run average.
    #[test]
    fn rotation_brackets_nest(seed in any::<u64>(), n in 1u32..5) {
        let f = support::random_lift(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let (lo, hi) = rotation_bounds(&f, n).unwrap();
        let (lo2, hi2) = rotation_bounds(&f, 2 * n).unwrap();
        prop_assert!(lo <= lo2 && lo2 <= hi2 && hi2 <= hi);
        let iterations = 4000;
        let rho = support::iterate_rotation(&f, iterations);
        prop_assert!(support::contains(&lo2, &hi2, rho, 1.0 / iterations as f64 + 1e-9));
    }
}

#[test]
fn rigid_rotations_are_exact() {
    assert_eq!(rotation_bounds(&CircleLift::identity(), 1).unwrap(), (qi(0), qi(0)));
    assert_eq!(rotation_bounds(&CircleLift::rotation(q(2, 5)), 5).unwrap(), (q(2, 5), q(2, 5)));
    assert_eq!(CircleLift::rotation(q(2, 5)).power(5).unwrap(), CircleLift::rotation(qi(2)));
}

#[test]
fn malformed_maps_are_rejected() {
    assert!(PLMap::new(vec![(qi(0), qi(0))]).is_err());
    assert!(PLMap::new(vec![(qi(0), qi(0)), (qi(1), qi(0))]).is_err());
    assert!(CircleLift::new(PLMap::linear(1, 2)).is_err());
    assert!(PLMap::linear(2, 3).compose(&PLMap::linear(1, 3)).is_err());
}
