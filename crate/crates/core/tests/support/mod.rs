//! Shared test helpers: fixture access and an exhaustive ordering oracle for
//! the constraint solver.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use vh_core::constraints::{ConstraintSet, Height, Pair};

pub const FIG8: &str = "cPcbbbiht_12";
pub const K10_145: &str = "gLLMQaedfdffjxaxjkn_200211";

// resolves from this crate and from crates that include this module by path
pub fn fixture_path() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/census_fixture.txt").to_string()
}

pub fn full_census_path() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/veering_census.txt.gz").to_string()
}

/// Fixture lines as (signature, ladder counts per cusp, [toggle, red, blue]).
pub fn fixture_rows() -> Vec<(String, Vec<usize>, Vec<usize>)> {
    let text = std::fs::read_to_string(fixture_path()).unwrap();
    text.lines()
        .map(|l| {
            let cols: Vec<&str> = l.split_whitespace().collect();
            let list = |s: &str| s.trim_matches(['[', ']']).split(',').map(|x| x.parse().unwrap()).collect();
            (cols[0].to_string(), list(cols[7]), list(cols[8]))
        })
        .collect()
}

/// Random constraint set: up to `max_vars` variables, fan offsets below `fan`.
pub fn random_instance(rng: &mut impl Rng, max_vars: usize, fan: u32) -> ConstraintSet {
    let num_vars = rng.gen_range(1..=max_vars);
    let mut groups = BTreeMap::new();
    for key in 0..rng.gen_range(1..=3) {
        let pairs = (0..rng.gen_range(1..=5))
            .map(|_| {
                let mut h = || Height { offset: rng.gen_range(0..fan), var: rng.gen_range(0..num_vars) };
                Pair { a: h(), b: h() }
            })
            .collect();
        groups.insert(key, pairs);
    }
    ConstraintSet { num_vars, groups }
}

/// Feasibility by exhaustive search over strict total orders of the
/// variables. Ties never help: two distinct pairs need strict comparisons on
/// both sides, so any feasible assignment can be perturbed to have distinct
/// heights. Partial orders are pruned as soon as a fully assigned comparison
/// fails, but every order is still reachable.
pub fn brute_force_feasible(cs: &ConstraintSet) -> bool {
    let n = cs.num_vars;
    // comparisons, bucketed by the largest variable they mention
    let mut checks: Vec<Vec<(Pair, Pair)>> = vec![Vec::new(); n];
    for pairs in cs.groups.values() {
        for (i, p) in pairs.iter().enumerate() {
            for q in &pairs[i + 1..] {
                if p != q {
                    let top = [p.a.var, p.b.var, q.a.var, q.b.var].into_iter().max().unwrap();
                    checks[top].push((*p, *q));
                }
            }
        }
    }
    let mut rank = vec![usize::MAX; n];
    let mut used = vec![false; n];
    assign(0, &mut rank, &mut used, &checks)
}

fn cmp(x: &Height, y: &Height, rank: &[usize]) -> std::cmp::Ordering {
    (x.offset, rank[x.var]).cmp(&(y.offset, rank[y.var]))
}

fn assign(var: usize, rank: &mut [usize], used: &mut [bool], checks: &[Vec<(Pair, Pair)>]) -> bool {
    let n = rank.len();
    if var == n {
        return true;
    }
    for r in 0..n {
        if used[r] {
            continue;
        }
        rank[var] = r;
        used[r] = true;
        let ok = checks[var].iter().all(|(p, q)| {
            let (ca, cb) = (cmp(&p.a, &q.a, rank), cmp(&p.b, &q.b, rank));
            ca != std::cmp::Ordering::Equal && ca == cb
        });
        if ok && assign(var + 1, rank, used, checks) {
            return true;
        }
        used[r] = false;
    }
    rank[var] = usize::MAX;
    false
}

use vh_core::holonomy::{CircleLift, PLMap};
use vh_core::rational::{q, to_f64, Q};

/// A random PL lift with up to `k` interior breakpoints on a 1/16 grid and
/// F(0) in [-1, 1).
pub fn random_lift(rng: &mut impl Rng, k: usize) -> CircleLift {
    let grid = 16i64;
    let c = q(rng.gen_range(-grid..grid), grid);
    let pick = |rng: &mut dyn rand::RngCore| {
        let mut v: Vec<i64> = (0..rng.gen_range(0..=k)).map(|_| rng.gen_range(1..grid)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let xs = pick(rng);
    let mut ys = pick(rng);
    ys.truncate(xs.len());
    let mut pts = vec![(q(0, 1), c.clone())];
    for (x, y) in xs.iter().zip(&ys) {
        pts.push((q(*x, grid), &c + q(*y, grid)));
    }
    pts.push((q(1, 1), &c + q(1, 1)));
    CircleLift::new(PLMap::new(pts).unwrap()).unwrap()
}

/// F^n(0)/n by floating-point iteration of the lift, independent of the
/// exact composition code; within 1/n of the rotation number.
pub fn iterate_rotation(f: &CircleLift, n: usize) -> f64 {
    let pts: Vec<(f64, f64)> = f.period().points().iter().map(|(x, y)| (to_f64(x), to_f64(y))).collect();
    let eval = |x: f64| {
        let k = x.floor();
        let u = x - k;
        let i = pts.iter().position(|p| p.0 >= u).unwrap().max(1);
        let ((x0, y0), (x1, y1)) = (pts[i - 1], pts[i]);
        y0 + (u - x0) * (y1 - y0) / (x1 - x0) + k
    };
    let mut x = 0.0;
    for _ in 0..n {
        x = eval(x);
    }
    x / n as f64
}

pub fn contains(lo: &Q, hi: &Q, x: f64, slack: f64) -> bool {
    to_f64(lo) - slack <= x && x <= to_f64(hi) + slack
}

/// One random increasing map per edge, breakpoints on a 1/12 grid.
pub fn random_solution(rng: &mut impl Rng, tracks: &vh_core::cusp::Tracks) -> vh_core::holonomy::HolonomySolution {
    let maps = tracks
        .fan_sizes
        .iter()
        .map(|&(n, m)| {
            let k = rng.gen_range(0..4);
            let mut xs: Vec<i64> = (0..k).map(|_| rng.gen_range(1..12 * n as i64)).collect();
            let mut ys: Vec<i64> = (0..k).map(|_| rng.gen_range(1..12 * m as i64)).collect();
            xs.sort_unstable();
            xs.dedup();
            ys.sort_unstable();
            ys.dedup();
            let pairs: Vec<(Q, Q)> = xs.iter().zip(&ys).map(|(&x, &y)| (q(x, 12), q(y, 12))).collect();
            PLMap::through(n as i64, m as i64, &pairs).unwrap()
        })
        .collect();
    vh_core::holonomy::HolonomySolution { maps }
}
