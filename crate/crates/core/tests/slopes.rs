mod support;

use proptest::prelude::*;
use vh_core::cusp::build_cusp_tracks;
use vh_core::curves::Budget;
use vh_core::rational::{q, qi, Q};
use vh_core::search::{realizable_interval, surgery_report, SweepBudget};
use vh_core::slope::{
    coefficient_to_chart, coefficient_to_slope, convert_rational, convert_slope, PeripheralBasis, SlopeValue,
};
use vh_core::triangulation::decode_veering;
use vh_core::Error;

fn basis() -> PeripheralBasis {
    PeripheralBasis::new((6, -1), (-1, 0)).unwrap()
}

fn s(text: &str) -> SlopeValue {
    text.parse().unwrap()
}

#[test]
fn knot_conversions() {
    let b = basis();
    // (3,-1) = λ + 3μ and (1,-1) = λ + 5μ
    assert_eq!(convert_slope(s("-1/3"), &b).unwrap(), s("3"));
    assert_eq!(convert_slope(s("-1"), &b).unwrap(), s("5"));
    // derived by hand: c = 6 + 1/s
    assert_eq!(convert_slope(SlopeValue::Infinity, &b).unwrap(), s("6"));
    assert_eq!(convert_slope(s("0"), &b).unwrap(), SlopeValue::Infinity);
    assert_eq!(convert_slope(s("-4"), &b).unwrap(), s("23/4"));
    assert_eq!(convert_slope(s("4"), &b).unwrap(), s("25/4"));
}

#[test]
fn slope_parsing_and_order() {
    assert_eq!(s("2/-4"), SlopeValue::new(-1, 2));
    assert_eq!(s("1/0"), SlopeValue::Infinity);
    assert!("x".parse::<SlopeValue>().is_err());
    let mut v = vec![s("inf"), s("1/2"), s("-3"), s("0")];
    v.sort();
    assert_eq!(v, [s("-3"), s("0"), s("1/2"), s("inf")]);
}

#[test]
fn bases_must_be_unimodular() {
    assert_eq!(PeripheralBasis::new((2, 0), (0, 1)).unwrap_err(), Error::NotUnimodular(2));
    assert!(PeripheralBasis::new((1, 0), (0, 1)).is_ok());
}

proptest! {
    #[test]
    fn conversion_round_trips(p in -50i64..50, d in 1i64..30) {
        let b = basis();
        let slope = SlopeValue::new(p, d);
        let c = convert_slope(slope, &b).unwrap();
        prop_assert_eq!(coefficient_to_slope(c, &b).unwrap(), slope);
        let exact = convert_rational(slope.to_rational().as_ref(), &b).unwrap();
        let direct = c.to_rational();
        prop_assert_eq!(exact.as_ref(), direct.as_ref());
        prop_assert_eq!(coefficient_to_chart(exact.as_ref(), &b).unwrap(), slope.to_rational());
    }

    /// c(s) = 6 + 1/s is decreasing on each side of s = 0.
    #[test]
    fn conversion_is_monotone(a in 1i64..200, b in 1i64..200, neg in any::<bool>()) {
        prop_assume!(a != b);
        let sign = if neg { -1 } else { 1 };
        let (x, y) = (q(sign * a, 7), q(sign * b, 7));
        let c = |v: &Q| convert_rational(Some(v), &basis()).unwrap().unwrap();
        prop_assert_eq!(x < y, c(&x) > c(&y));
    }
}

#[test]
fn surgery_intervals_for_k10_145() {
    let sig = support::K10_145;
    let tracks = build_cusp_tracks(&decode_veering(sig).unwrap()).unwrap();
    let budget = SweepBudget {
        denominator_cap: 3,
        curves: Budget { max_length: 12, max_nodes: 20_000, ..Budget::default() },
        anneal: None,
    };
    let report = realizable_interval(sig, &tracks, &budget).unwrap();
    let slopes = report.cusps[0].realizable_slopes();
    assert_eq!(slopes.first(), Some(&s("-1/3")));
    assert_eq!(slopes.last(), Some(&s("0")));

    let sr = surgery_report(&report, 0, &basis()).unwrap();
    assert_eq!(sr.degeneracy_coefficient, s("6"));
    assert_eq!(sr.admissible, ["(-inf, 3)"]);
    for c in [qi(-100), qi(0), q(5, 2), q(2999, 1000)] {
        assert!(sr.is_admissible(&c), "{c}");
    }
    for c in [qi(3), qi(4), qi(6)] {
        assert!(!sr.is_admissible(&c), "{c}");
    }
    // everything in (23/4, 25/4) except the degeneracy coefficient itself
    for k in 1..50 {
        let c = q(23, 4) + q(k, 100);
        if c != qi(6) {
            assert!(sr.is_obstructed(&c), "{c}");
        }
    }
    assert!(!sr.is_obstructed(&qi(6)));
    for c in [qi(5), q(119, 10), q(49, 10)] {
        assert!(sr.is_obstructed(&c), "{c}");
    }
    // descent extremes are attained by run cycles, so the endpoints stay open
    for c in [qi(3), q(24, 5), qi(12), q(121, 10)] {
        assert!(!sr.is_obstructed(&c), "{c}");
    }
    assert_eq!(sr.obstructed, ["(24/5, 6)", "(6, 12)"]);
    assert_eq!(sr.unknown, "[3, 24/5] u [12, inf)");
}
