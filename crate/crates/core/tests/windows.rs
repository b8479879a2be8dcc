mod support;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vh_core::cusp::build_cusp_tracks;
use vh_core::holonomy::{
    sign_certificate, slope_window, trace_leaf, trace_window, HolonomySolution, Sign, SlopeWindow, Termination,
};
use vh_core::rational::{q, qi, Q};
use vh_core::search::descent_bound;
use vh_core::triangulation::decode_veering;
use vh_core::Error;

use support::{random_solution, K10_145};

fn interval(w: &SlopeWindow) -> (Q, Q) {
    match w {
        SlopeWindow::Interval { lo, hi } => (lo.clone(), hi.clone()),
        SlopeWindow::Infinity => panic!("10_145 leaves always cross rungs"),
    }
}

/// Seeds at generic heights (denominator 97 avoids the 1/12 breakpoint grid).
fn seeds(tracks: &vh_core::cusp::Tracks) -> Vec<(usize, Q)> {
    tracks.cusps[0].poles[0].branches.iter().take(3).map(|&b| (b, q(31, 97))).collect()
}

#[test]
fn windows_shrink_as_leaves_get_longer() {
    let tracks = build_cusp_tracks(&decode_veering(K10_145).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for _ in 0..10 {
        let sol = random_solution(&mut rng, &tracks);
        let mut prev: Option<(Q, Q)> = None;
        for steps in [30, 90, 180] {
            let w = match slope_window(&tracks, &sol, &seeds(&tracks), steps) {
                Ok(w) => interval(&w),
                Err(Error::IntegerHeight { .. }) => break,
                Err(e) => panic!("{e}"),
            };
            if let Some((lo, hi)) = &prev {
                assert!(lo <= &w.0 && w.1 <= *hi, "window grew at {steps} steps");
            }
            prev = Some(w);
            checked += 1;
        }
    }
    assert!(checked > 15);
}

/// Every solution's slope must lie in the descent range [-5/6, 1/6]. Exact
/// heights grow along a leaf, so traces stay short and windows stay wide.
#[test]
fn random_solutions_respect_descent_bound() {
    let tracks = build_cusp_tracks(&decode_veering(K10_145).unwrap()).unwrap();
    let d = descent_bound(&tracks, 0);
    let (min, max) = (d.min_slope.unwrap(), d.max_slope.unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..20 {
        let sol = random_solution(&mut rng, &tracks);
        let Ok(w) = slope_window(&tracks, &sol, &seeds(&tracks), 150) else { continue };
        let (lo, hi) = interval(&w);
        assert!(lo <= max && hi >= min, "solution {i}: window [{lo}, {hi}] misses [{min}, {max}]");
    }
}

#[test]
fn linear_solution_leaf() {
    let tracks = build_cusp_tracks(&decode_veering(K10_145).unwrap()).unwrap();
    let sol = HolonomySolution::linear(&tracks);
    let start = tracks.cusps[0].ladders[0].rungs[0];
    let leaf = trace_leaf(&tracks, &sol, start, &q(1, 3), 400).unwrap();
    // each step is a branch of the cusp, and laps count horizontal units
    assert!(leaf.steps.iter().all(|(b, _)| tracks.cusps[0].branches.contains(b)));
    assert_eq!(leaf.laps.len() as i64, leaf.laps.last().map_or(0, |l| l.0));
    if leaf.termination == Termination::Closed {
        assert!(matches!(trace_window(&leaf), SlopeWindow::Interval { ref lo, ref hi } if lo == hi));
    }
}

#[test]
fn heights_must_be_interior() {
    let tracks = build_cusp_tracks(&decode_veering(K10_145).unwrap()).unwrap();
    let sol = HolonomySolution::linear(&tracks);
    assert!(trace_leaf(&tracks, &sol, 0, &qi(0), 10).is_err());
    assert!(trace_leaf(&tracks, &sol, 0, &qi(1), 10).is_err());
}

#[test]
fn sign_certificates() {
    let w = |a: Q, b: Q| SlopeWindow::Interval { lo: a, hi: b };
    assert_eq!(sign_certificate(&[w(q(-1, 2), q(-1, 3))], &qi(0)), Sign::Below);
    assert_eq!(sign_certificate(&[w(q(1, 3), q(1, 2)), w(q(1, 9), q(1, 8))], &qi(0)), Sign::Above);
    assert_eq!(sign_certificate(&[w(q(-1, 3), q(1, 2))], &qi(0)), Sign::Inconclusive);
    assert_eq!(sign_certificate(&[w(q(1, 3), q(1, 2)), w(q(-1, 3), q(-1, 4))], &qi(0)), Sign::Inconclusive);
    assert_eq!(sign_certificate(&[SlopeWindow::Infinity], &qi(0)), Sign::Inconclusive);
    assert_eq!(sign_certificate(&[], &qi(0)), Sign::Inconclusive);
}
