//! One PASS/FAIL line per acceptance criterion. Runs the `vh` binary where the
//! criterion is about the command line, the library otherwise.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vh_core::constraints::{check_realizable, verify_heights, Certificate, ConstraintSet, Height, Pair, Witness};
use vh_core::curves::{
    curve_constraints, extend_to_solution, fit_edge_map, realize_slope, Budget, Pooling, Realization,
    RealizationCertificate,
};
use vh_core::cusp::{build_cusp_tracks, check_track_invariants, Direction, Tracks};
use vh_core::holonomy::{
    default_seeds, rotation_bounds, sign_certificate, slope_window, trace_leaf, CircleLift, PLMap, Sign, Termination,
};
use vh_core::rational::{fmt_q, q, qi, Q};
use vh_core::search::{is_two_ladder, milnor_wood_bound, realizable_interval, surgery_report, BoundKind, SweepBudget};
use vh_core::slope::{convert_slope, slope_of_class, PeripheralBasis, SlopeValue};
use vh_core::triangulation::decode_veering;

use support::{fixture_rows, full_census_path, FIG8, K10_145};

/// `Unattainable` is a criterion that cannot hold as stated, with the evidence;
/// it prints as FAIL but does not fail the run. `Err` is a regression.
enum Verdict {
    Pass(String),
    Unattainable(String),
}

type Outcome = Result<Verdict, String>;

fn pass(detail: String) -> Outcome {
    Ok(Verdict::Pass(detail))
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Run {
    stdout: String,
    code: Option<i32>,
    elapsed: Duration,
}

fn vh(args: &[&str]) -> Run {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_vh")).args(args).output().expect("vh binary runs");
    Run { stdout: String::from_utf8_lossy(&out.stdout).into_owned(), code: out.status.code(), elapsed: started.elapsed() }
}

fn k10_145() -> Tracks {
    build_cusp_tracks(&decode_veering(K10_145).unwrap()).unwrap()
}

fn certify(tracks: &Tracks, slope: &str) -> Result<Box<RealizationCertificate>, String> {
    match realize_slope(tracks, 0, slope.parse().unwrap(), &Budget::default()).map_err(|e| e.to_string())? {
        Realization::Certified(c) => Ok(c),
        Realization::Exhausted { .. } => Err(format!("{slope} not certified with the default budget")),
    }
}

fn fan_edge(tracks: &Tracks, fans: (usize, usize)) -> usize {
    tracks.fan_sizes.iter().position(|&f| f == fans).unwrap()
}

fn realize_cli() -> Outcome {
    let tracks = k10_145();
    let mut times = Vec::new();
    for s in ["-1/3", "0"] {
        let run = vh(&["realize", K10_145, "--slope", s]);
        ensure!(run.code == Some(0), "realize {s} exited with {:?}", run.code);
        ensure!(run.stdout.contains(&format!("slope {s}: CERTIFIED")), "realize {s}: {}", run.stdout);
        ensure!(run.stdout.contains("replay: ok"), "realize {s}: certificate did not replay");
        ensure!(run.elapsed < Duration::from_secs(300), "realize {s} took {:?}", run.elapsed);
        times.push(format!("{s} in {} ms", run.elapsed.as_millis()));
    }
    // the map drawn on the 5|5 edge: 3/2 -> 7/5, 17/5 -> 8/5, 18/5 -> 5/2
    let a = PLMap::through(5, 5, &[(q(3, 2), q(7, 5)), (q(17, 5), q(8, 5)), (q(18, 5), q(5, 2))]).unwrap();
    let cert = certify(&tracks, "-1/3")?;
    let cs = curve_constraints(&cert.curve, Pooling::Edge);
    let edge = fan_edge(&tracks, (5, 5));
    let fit = fit_edge_map(&cs, edge, &a, 20).ok_or("explicit map does not fit the -1/3 certificate")?;
    let fitted: Vec<String> = fit.iter().map(fmt_q).collect();
    pass(format!("certified {}; explicit map fits edge {edge} with heights [{}]", times.join(", "), fitted.join(", ")))
}

fn inversion_witness() -> Outcome {
    // B: [0,2] -> [0,2] sending a point of [1,2] into [0,1] and one of [0,1] into [1,2]
    let tracks = k10_145();
    let edge = fan_edge(&tracks, (2, 2));
    let h = |offset, var| Height { offset, var };
    let pairs = vec![Pair { a: h(1, 0), b: h(0, 1) }, Pair { a: h(0, 2), b: h(1, 3) }];
    let cs = ConstraintSet { num_vars: 4, groups: BTreeMap::from([(edge, pairs)]) };
    ensure!(!support::brute_force_feasible(&cs), "ordering oracle finds the instance feasible");
    match check_realizable(&cs) {
        Certificate::Infeasible { witness: w @ Witness::Inversion { .. } } => pass(format!("edge {edge}: {w:?}")),
        other => Err(format!("expected an inversion witness, got {other:?}")),
    }
}

fn ladder_structure() -> Outcome {
    let tri = decode_veering(K10_145).unwrap();
    let tracks = build_cusp_tracks(&tri).unwrap();
    let c = &tracks.cusps[0];
    let up = c.poles.iter().filter(|p| p.direction == Direction::Up).count();
    let down = c.poles.iter().filter(|p| p.direction == Direction::Down).count();
    ensure!(tracks.cusps.len() == 1 && c.ladders.len() == 2, "10_145: {} ladders", c.ladders.len());
    ensure!((up, down) == (1, 1), "10_145 poles: {up} up, {down} down");
    let mut sigs = vec![K10_145.to_string(), FIG8.to_string()];
    sigs.extend(fixture_rows().into_iter().map(|r| r.0));
    let mut failures = 0;
    for sig in &sigs {
        let tri = decode_veering(sig).map_err(|e| format!("{sig}: {e}"))?;
        let tracks = build_cusp_tracks(&tri).map_err(|e| format!("{sig}: {e}"))?;
        let bad = check_track_invariants(&tri, &tracks);
        if !bad.is_empty() {
            eprintln!("  {sig}: {bad:?}");
            failures += 1;
        }
    }
    ensure!(failures == 0, "{failures} triangulations violate track invariants");
    pass(format!("10_145 has 1 up / 1 down ladder; invariants hold on {} triangulations", sigs.len()))
}

fn milnor_wood() -> Outcome {
    let budget = Budget { max_length: 12, max_nodes: 10_000, ..Budget::default() };
    let certified = |tracks: &Tracks, c: usize, s: SlopeValue| -> Result<bool, String> {
        match realize_slope(tracks, c, s, &budget).map_err(|e| e.to_string())? {
            Realization::Certified(cert) => cert.replay(tracks).map(|_| true).map_err(|e| e.to_string()),
            Realization::Exhausted { .. } => Ok(false),
        }
    };
    let probe = [-5, -4, -1, 0, 1, 4, 5].map(|n| SlopeValue::new(n, 1));
    let (mut one_cusped, mut hits) = (0, 0);
    let mut multi: Vec<String> = Vec::new();
    let mut counterexamples: Vec<String> = Vec::new();
    for (sig, _, _) in fixture_rows() {
        let tracks = build_cusp_tracks(&decode_veering(&sig).unwrap()).unwrap();
        for c in (0..tracks.cusps.len()).filter(|&c| is_two_ladder(&tracks, c)) {
            let ob = milnor_wood_bound(&tracks, c);
            if tracks.cusps.len() > 1 {
                // the bound is only proven for one cusp; look for certified slopes beyond it
                ensure!(ob.below.is_none() && ob.above.is_none(), "{sig} cusp {c}: bound applied with several cusps");
                multi.push(format!("{sig}#{c}"));
                let big: Vec<String> = [-5, -4, 4, 5]
                    .map(|n| SlopeValue::new(n, 1))
                    .iter()
                    .filter_map(|&s| certified(&tracks, c, s).map(|ok| ok.then(|| s.to_string())).transpose())
                    .collect::<Result<_, _>>()?;
                if !big.is_empty() {
                    counterexamples.push(format!("{sig}#{c} {{{}}}", big.join(",")));
                }
                continue;
            }
            one_cusped += 1;
            for (ray, bound) in [(&ob.below, -4), (&ob.above, 4)] {
                let ok = ray.as_ref().is_some_and(|r| r.bound == qi(bound) && r.inclusive && r.kind == BoundKind::MilnorWood);
                ensure!(ok, "{sig} cusp {c}: obstruction {}", ob.describe());
            }
            for s in probe {
                if certified(&tracks, c, s)? {
                    hits += 1;
                    ensure!(!ob.contains(&s.to_rational().unwrap()), "{sig} cusp {c}: certified {s} is obstructed");
                }
            }
        }
    }
    let tracks = k10_145();
    for s in ["-1/3", "0"] {
        ensure!(!milnor_wood_bound(&tracks, 0).contains(&s.parse().unwrap()), "10_145: {s} obstructed");
    }
    let held = format!(
        "{one_cusped} two-ladder cusps of one-cusped entries obstruct exactly |s| >= 4; {hits} probe certificates, none obstructed"
    );
    if multi.is_empty() {
        return pass(held);
    }
    ensure!(!counterexamples.is_empty(), "{held}; {} multi-cusp two-ladder cusps left unchecked", multi.len());
    Ok(Verdict::Unattainable(format!(
        "{held}; but {} of {} two-ladder cusps in multi-cusp entries carry replayed certificates with |s| >= 4, \
         so no obstruction at +-4 there can be disjoint from certified slopes (first: {})",
        counterexamples.len(),
        multi.len(),
        counterexamples[..3.min(counterexamples.len())].join("; ")
    )))
}

fn surgery() -> Outcome {
    let basis = PeripheralBasis::new((6, -1), (-1, 0)).unwrap();
    let conv = |s: SlopeValue| convert_slope(s, &basis).map_err(|e| e.to_string());
    for (chart, coeff) in [("-1/3", "3"), ("-1", "5"), ("-4", "23/4"), ("4", "25/4")] {
        let got = conv(chart.parse().unwrap())?;
        ensure!(got == coeff.parse().unwrap(), "chart {chart} -> {got}, expected {coeff}");
    }
    ensure!(conv(SlopeValue::Infinity)? == SlopeValue::new(6, 1), "degeneracy does not map to 6");

    let tracks = k10_145();
    let budget = SweepBudget {
        denominator_cap: 3,
        curves: Budget { max_length: 12, max_nodes: 20_000, ..Budget::default() },
        anneal: None,
    };
    let report = realizable_interval(K10_145, &tracks, &budget).map_err(|e| e.to_string())?;
    let sr = surgery_report(&report, 0, &basis).map_err(|e| e.to_string())?;
    ensure!(sr.degeneracy_coefficient == SlopeValue::new(6, 1), "degeneracy coefficient {}", sr.degeneracy_coefficient);
    ensure!(sr.admissible.first().is_some_and(|a| a == "(-inf, 3)"), "admissible {:?}", sr.admissible);
    for c in [qi(-1000), qi(0), q(2999, 1000)] {
        ensure!(sr.is_admissible(&c), "{c} not admissible");
    }
    // (23/4, 25/4) minus 6, sampled on a fine grid plus points hugging the ends
    let mut samples: Vec<Q> = (1..200).map(|i| q(23, 4) + q(i, 400)).filter(|c| *c != qi(6)).collect();
    samples.extend([q(23, 4) + q(1, 10_000), q(25, 4) - q(1, 10_000), qi(6) - q(1, 10_000), qi(6) + q(1, 10_000)]);
    for c in &samples {
        ensure!(sr.is_obstructed(c), "{c} not obstructed; obstructed = {:?}", sr.obstructed);
    }
    ensure!(!sr.is_obstructed(&qi(6)), "the degeneracy coefficient is reported obstructed");
    pass(format!(
        "-1/3 -> 3, -1 -> 5, inf -> 6; admissible {:?}; obstructed {:?} covers (23/4, 25/4) \\ {{6}}",
        sr.admissible, sr.obstructed
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut feasible, mut infeasible) = (0, 0);
    let n = 2500;
    for i in 0..n {
        let cs = support::random_instance(&mut rng, 8, 4);
        let oracle = support::brute_force_feasible(&cs);
        match check_realizable(&cs) {
            Certificate::Feasible { heights } => {
                ensure!(oracle, "instance {i}: solver feasible, oracle infeasible: {cs:?}");
                ensure!(verify_heights(&cs, &heights), "instance {i}: heights fail substitution");
                feasible += 1;
            }
            Certificate::Infeasible { .. } => {
                ensure!(!oracle, "instance {i}: solver infeasible, oracle feasible: {cs:?}");
                infeasible += 1;
            }
        }
    }
    pass(format!("{n} instances agree ({feasible} feasible, {infeasible} infeasible)"))
}

fn round_trip() -> Outcome {
    let tracks = k10_145();
    let mut sign = None;
    for s in ["-1/3", "0"] {
        let cert = certify(&tracks, s)?;
        let cs = curve_constraints(&cert.curve, Pooling::Edge);
        let sol = extend_to_solution(&tracks, &cs, &cert.heights).map_err(|e| e.to_string())?;
        let leaf = trace_leaf(&tracks, &sol, cert.curve.branches[0], &cert.heights[0], 10 * cert.curve.len())
            .map_err(|e| e.to_string())?;
        ensure!(leaf.termination == Termination::Closed, "{s}: leaf did not close");
        ensure!(leaf.steps.len() + 1 == cert.curve.len(), "{s}: leaf length {} vs curve {}", leaf.steps.len() + 1, cert.curve.len());
        let got = slope_of_class(leaf.displacement).map_err(|e| e.to_string())?;
        ensure!(got == cert.slope, "{s}: leaf slope {got}");
        if s == "-1/3" {
            let w = slope_window(&tracks, &sol, &default_seeds(&tracks, 0), 600).map_err(|e| e.to_string())?;
            sign = Some(sign_certificate(&[w], &qi(0)));
        }
    }
    ensure!(sign == Some(Sign::Below), "-1/3 solution sign {sign:?}");
    pass("leaves close on -1/3 and 0 with matching slopes; -1/3 solution is BELOW 0".into())
}

fn rotation() -> Outcome {
    ensure!(rotation_bounds(&CircleLift::identity(), 1).unwrap() == (qi(0), qi(0)), "identity");
    ensure!(rotation_bounds(&CircleLift::rotation(q(2, 5)), 5).unwrap() == (q(2, 5), q(2, 5)), "rotation 2/5");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let iterations = 4000;
    for i in 0..50 {
        let f = support::random_lift(&mut rng, 3);
        let n = 1 + i % 4;
        let (lo, hi) = rotation_bounds(&f, n).map_err(|e| e.to_string())?;
        let (lo2, hi2) = rotation_bounds(&f, 2 * n).map_err(|e| e.to_string())?;
        ensure!(lo <= lo2 && lo2 <= hi2 && hi2 <= hi, "lift {i}: windows do not nest");
        let rho = support::iterate_rotation(&f, iterations);
        ensure!(support::contains(&lo2, &hi2, rho, 1.0 / iterations as f64 + 1e-9), "lift {i}: {rho} outside window");
    }
    pass("identity [0,0], rotation 2/5 exact, 50 random lifts nest around the iterated average".into())
}

fn annealing() -> Outcome {
    let args = ["anneal", K10_145, "--target", "0", "--side", "below", "--seed", "1"];
    let (a, b) = (vh(&args), vh(&args));
    ensure!(a.stdout.starts_with("SUCCESS Below"), "below: {}", a.stdout.lines().next().unwrap_or(""));
    ensure!(a.elapsed < Duration::from_secs(300), "below took {:?}", a.elapsed);
    ensure!(a.stdout == b.stdout, "reruns with seed 1 differ");
    let above = vh(&["anneal", K10_145, "--target", "0", "--side", "above", "--seed", "1"]);
    let first = above.stdout.lines().next().unwrap_or("").to_string();
    ensure!(first.starts_with("FAILURE"), "above: {first}");
    pass(format!("below certified in {:.1}s, identical rerun; above: {first}", a.elapsed.as_secs_f64()))
}

fn census() -> Outcome {
    let path = full_census_path();
    if !std::path::Path::new(&path).exists() {
        return Err(format!("census not available at {path}"));
    }
    let run = vh(&["--format", "json-like", "census", &path]);
    ensure!(run.code == Some(0), "census exited with {:?}", run.code);
    let v: serde_json::Value = serde_json::from_str(&run.stdout).map_err(|e| e.to_string())?;
    ensure!(v["total"] == 87047, "total {}", v["total"]);
    ensure!(v["failed"] == 0 && v["invariant_violations"] == 0, "failed {} violations {}", v["failed"], v["invariant_violations"]);
    let matched = v["matched"].as_i64().ok_or("no matched count")?;
    pass(format!(
        "total 87047 in {:.0}s; two-ladder single-cusp {matched} vs reference 31138 (difference {:+}); histogram {}",
        run.elapsed.as_secs_f64(),
        matched - 31138,
        v["single_cusp_histogram"]
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("realize -1/3 and 0 on 10_145", realize_cli),
        ("edge B inversion witness", inversion_witness),
        ("ladder structure and track invariants", ladder_structure),
        ("Milnor-Wood bound on two-ladder cusps", milnor_wood),
        ("surgery conversions and intervals", surgery),
        ("solver agrees with ordering oracle", oracle_equivalence),
        ("certificate round trip and sign", round_trip),
        ("rotation bounds", rotation),
        ("annealing reproducibility", annealing),
        ("census scale", census),
    ];
    let (mut passed, mut regressions) = (0, 0);
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(Verdict::Pass(detail)) => {
                passed += 1;
                println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
            Ok(Verdict::Unattainable(why)) => println!("FAIL {:>2} {name} ({secs:.1}s): unattainable as stated: {why}", i + 1),
            Err(why) => {
                regressions += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{passed} of {} criteria pass, {regressions} regressions", criteria.len());
    if regressions > 0 {
        std::process::exit(1);
    }
}
