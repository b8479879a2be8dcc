mod support;

use proptest::prelude::*;
use vh_core::constraints::check_realizable;
use vh_core::curves::{
    curve_constraints, enumerate_weight_systems, extend_to_solution, fit_edge_map, realize_slope, weights_to_multicurve,
    Budget, CarriedCurve, Pooling, Realization, RealizationCertificate, WeightSystem,
};
use vh_core::cusp::{build_cusp_tracks, Tracks};
use vh_core::holonomy::{trace_leaf, PLMap, Termination};
use vh_core::rational::q;
use vh_core::slope::{slope_of_class, SlopeValue};
use vh_core::triangulation::decode_veering;

use support::K10_145;

fn tracks() -> Tracks {
    build_cusp_tracks(&decode_veering(K10_145).unwrap()).unwrap()
}

fn certify(t: &Tracks, slope: &str) -> Box<RealizationCertificate> {
    match realize_slope(t, 0, slope.parse().unwrap(), &Budget::default()).unwrap() {
        Realization::Certified(c) => c,
        Realization::Exhausted { .. } => panic!("{slope} not certified"),
    }
}

/// The map drawn for the edge with fans 5|5.
fn explicit_a() -> PLMap {
    PLMap::through(5, 5, &[(q(3, 2), q(7, 5)), (q(17, 5), q(8, 5)), (q(18, 5), q(5, 2))]).unwrap()
}

#[test]
fn slopes_minus_third_and_zero_are_certified() {
    let t = tracks();
    for s in ["-1/3", "0"] {
        let cert = certify(&t, s);
        cert.replay(&t).unwrap();
        assert_eq!(cert.slope, s.parse::<SlopeValue>().unwrap());
        assert!(cert.curve.weights(&t).satisfies_switches(&t));
    }
}

#[test]
fn drawn_curve_for_minus_third_fits_explicit_map() {
    let t = tracks();
    let edge = t.fan_sizes.iter().position(|&f| f == (5, 5)).unwrap();
    // the curve as drawn, and the shortest one the search finds
    for walk in [vec![2, 29, 18, 0, 6, 3, 20], certify(&t, "-1/3").curve.branches] {
        let curve = CarriedCurve::new(&t, walk.clone()).unwrap();
        assert_eq!(curve.slope().unwrap(), SlopeValue::new(-1, 3));
        let cs = curve_constraints(&curve, Pooling::Edge);
        assert!(check_realizable(&cs).is_feasible());
        assert!(fit_edge_map(&cs, edge, &explicit_a(), 20).is_some(), "{walk:?}");
    }
}

#[test]
fn fit_rejects_an_incompatible_map() {
    let t = tracks();
    let cert = certify(&t, "-1/3");
    let edge = t.fan_sizes.iter().position(|&f| f == (5, 5)).unwrap();
    // the certificate's pairs on this edge send 3+t to 2+t'; the identity cannot
    let cs = curve_constraints(&cert.curve, Pooling::Edge);
    assert!(fit_edge_map(&cs, edge, &PLMap::identity(5), 20).is_none());
}

#[test]
fn certificates_round_trip_through_leaves() {
    let t = tracks();
    for s in ["-1/3", "0", "-1/6"] {
        let cert = certify(&t, s);
        let cs = curve_constraints(&cert.curve, Pooling::Edge);
        let sol = extend_to_solution(&t, &cs, &cert.heights).unwrap();
        let leaf = trace_leaf(&t, &sol, cert.curve.branches[0], &cert.heights[0], 10 * cert.curve.len()).unwrap();
        assert_eq!(leaf.termination, Termination::Closed, "{s}");
        assert_eq!(leaf.steps.len() + 1, cert.curve.len(), "{s}");
        assert_eq!(slope_of_class(leaf.displacement).unwrap(), cert.slope, "{s}");
    }
}

#[test]
fn tampered_certificates_fail_replay() {
    let t = tracks();
    let mut cert = *certify(&t, "-1/3");
    cert.heights[0] = q(99, 100);
    assert!(cert.replay(&t).is_err());
    let mut cert = *certify(&t, "-1/3");
    cert.slope = SlopeValue::new(-1, 2);
    assert!(cert.replay(&t).is_err());
}

#[test]
fn degeneracy_slope_is_refused() {
    assert!(realize_slope(&tracks(), 0, SlopeValue::Infinity, &Budget::default()).is_err());
}

#[test]
fn small_budgets_exhaust() {
    let budget = Budget { max_length: 10, max_nodes: 5_000, ..Budget::default() };
    match realize_slope(&tracks(), 0, SlopeValue::new(-1, 1), &budget).unwrap() {
        Realization::Exhausted { stats, .. } => assert!(stats.nodes <= 5_000 + 64),
        Realization::Certified(c) => panic!("slope -1 certified by {:?}", c.curve.branches),
    }
}

fn systems(class: (i64, i64)) -> Vec<WeightSystem> {
    enumerate_weight_systems(&tracks(), 0, class, &Budget { max_weight: 7, max_length: 7, ..Budget::default() })
}

#[test]
fn enumerated_systems_are_carried_curves() {
    let t = tracks();
    for class in [(1, 0), (3, -1), (2, -1)] {
        let all = systems(class);
        assert!(!all.is_empty(), "{class:?}");
        for ws in &all {
            assert!(ws.satisfies_switches(&t));
            assert_eq!(ws.class(&t), class);
            let curves = weights_to_multicurve(&t, ws).unwrap();
            let sum: Vec<u32> = curves.iter().fold(vec![0; ws.0.len()], |mut acc, c| {
                for (a, w) in acc.iter_mut().zip(&c.weights(&t).0) {
                    *a += w;
                }
                acc
            });
            assert_eq!(&sum, &ws.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Switch conditions are linear and the class map is additive.
    #[test]
    fn weights_add(i in 0usize..1000, j in 0usize..1000) {
        let t = tracks();
        let a = systems((1, 0));
        let b = systems((3, -1));
        let (x, y) = (&a[i % a.len()], &b[j % b.len()]);
        let sum = WeightSystem(x.0.iter().zip(&y.0).map(|(p, q)| p + q).collect());
        prop_assert!(sum.satisfies_switches(&t));
        prop_assert_eq!(sum.class(&t), (4, -1));
    }
}
