//! Obstructions, realizability sweeps, annealing and the per-manifold report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::constraints::check_realizable;
use crate::cusp::{BranchKind, Direction, Tracks};
use crate::curves::{path_constraints, realize_slope, Budget, Pooling, Realization, RealizationCertificate};
use crate::error::{Error, Result};
use crate::slope::{coefficient_to_chart, conversion_orientation, convert_rational, convert_slope, Coefficient, PeripheralBasis, SlopeValue};
use crate::holonomy::{sign_certificate, slope_window, HolonomySolution, PLMap, Sign, SlopeWindow};
use crate::rational::{fmt_q, from_f64_grid, qi, to_f64, Q};
use crate::triangulation::Side;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Which argument produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    /// Two-ladder cusps: slopes of solutions lie strictly between -4 and 4.
    MilnorWood,
    /// No single monotone run along a ladderpole may force an inversion.
    Descent,
}

/// One end of the obstructed set: every slope beyond `bound`, and the bound
/// itself when `inclusive`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ray {
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub bound: Q,
    pub inclusive: bool,
    pub kind: BoundKind,
}

/// Chart slopes that no solution can have, on one cusp. Infinity (the
/// degeneracy slope) is excluded separately and never listed here.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub below: Option<Ray>,
    pub above: Option<Ray>,
    pub notes: Vec<String>,
}

impl Obstruction {
    pub fn contains(&self, s: &Q) -> bool {
        let lo = self.below.as_ref().is_some_and(|r| s < &r.bound || (r.inclusive && s == &r.bound));
        let hi = self.above.as_ref().is_some_and(|r| s > &r.bound || (r.inclusive && s == &r.bound));
        lo || hi
    }

    /// The smaller obstructed set on neither side is kept: rays combine by union.
    pub fn union(mut self, other: Obstruction) -> Obstruction {
        self.below = stronger(self.below, other.below, false);
        self.above = stronger(self.above, other.above, true);
        self.notes.extend(other.notes);
        self
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(r) = &self.below {
            parts.push(format!("(-inf, {}{}", fmt_q(&r.bound), if r.inclusive { "]" } else { ")" }));
        }
        if let Some(r) = &self.above {
            parts.push(format!("{}{}, inf)", if r.inclusive { "[" } else { "(" }, fmt_q(&r.bound)));
        }
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join(" u ")
        }
    }
}

fn stronger(a: Option<Ray>, b: Option<Ray>, upper: bool) -> Option<Ray> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            // lower rays: the larger bound covers more; upper rays: the smaller
            let a_wins = match a.bound.cmp(&b.bound) {
                std::cmp::Ordering::Equal => a.inclusive || !b.inclusive,
                ord => (ord == std::cmp::Ordering::Greater) != upper,
            };
            Some(if a_wins { a } else { b })
        }
    }
}

/// Cusps with exactly one upward and one downward ladderpole.
pub fn is_two_ladder(tracks: &Tracks, cusp: usize) -> bool {
    let poles = &tracks.cusps[cusp].poles;
    poles.len() == 2
        && poles.iter().filter(|p| p.direction == Direction::Up).count() == 1
        && poles.iter().filter(|p| p.direction == Direction::Down).count() == 1
}

/// {|s| ≥ 4} for two-ladder cusps of one-cusped triangulations; nothing
/// otherwise. The argument needs both ends of every edge on the same torus:
/// with a second cusp, a ladderpole may repeat a single edge end, and a leaf
/// can descend along it without ever meeting the opposite end.
pub fn milnor_wood_bound(tracks: &Tracks, cusp: usize) -> Obstruction {
    let note = if !is_two_ladder(tracks, cusp) {
        Some(format!(
            "cusp {cusp} has {} ladders; the ±4 bound needs one upward and one downward ladder",
            tracks.cusps[cusp].ladders.len()
        ))
    } else if tracks.cusps.len() != 1 {
        Some(format!(
            "cusp {cusp} is one of {} cusps; the ±4 bound only holds for one-cusped triangulations",
            tracks.cusps.len()
        ))
    } else {
        None
    };
    if let Some(note) = note {
        return Obstruction { notes: vec![note], ..Obstruction::default() };
    }
    let ray = |b: i64| Ray { bound: qi(b), inclusive: true, kind: BoundKind::MilnorWood };
    Obstruction { below: Some(ray(-4)), above: Some(ray(4)), notes: Vec::new() }
}

/// A feasible leaf segment: enter along a rung, run along a ladderpole, leave
/// along the next rung.
#[derive(Clone, Debug, Serialize)]
pub struct RunArc {
    pub from: usize,
    pub to: usize,
    pub poles: Vec<usize>,
    pub displacement: (i64, i64),
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub arcs: Vec<RunArc>,
    /// Ladderpole runs longer than this many branches count as unbounded.
    pub run_cap: usize,
    /// Some feasible run reached the cap going down (resp. up).
    pub unbounded_down: bool,
    pub unbounded_up: bool,
    #[serde(serialize_with = "ser_opt_q")]
    pub min_slope: Option<Q>,
    #[serde(serialize_with = "ser_opt_q")]
    pub max_slope: Option<Q>,
    pub obstruction: Obstruction,
}

fn ser_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(q) => s.serialize_str(&fmt_q(q)),
        None => s.serialize_none(),
    }
}

fn segment_feasible(tracks: &Tracks, path: &[usize]) -> bool {
    path_constraints(tracks, path, Pooling::Edge).is_ok_and(|cs| check_realizable(&cs).is_feasible())
}

/// Every leaf of every solution is an infinite walk in the graph of feasible
/// runs, so its slope lies between the least and greatest mean vertical
/// displacement per horizontal unit over cycles of that graph.
pub fn descent_bound(tracks: &Tracks, cusp: usize) -> DescentReport {
    let track = &tracks.cusps[cusp];
    let rungs: Vec<usize> =
        track.branches.iter().copied().filter(|&b| matches!(tracks.branches[b].kind, BranchKind::Rung(_))).collect();
    let index: BTreeMap<usize, usize> = rungs.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let longest_pole = track.poles.iter().map(|p| p.branches.len()).max().unwrap_or(0);
    let run_cap = 3 * longest_pole + 2;
    let mut arcs = Vec::new();
    let (mut unbounded_down, mut unbounded_up) = (false, false);
    for &r in &rungs {
        let mut path = vec![r];
        loop {
            let head = tracks.branches[*path.last().unwrap()].head_end();
            let sw = &tracks.switches[head.vertex];
            let mut next_pole = None;
            for &c in sw.side(head.side.other()) {
                match tracks.branches[c].kind {
                    BranchKind::Rung(_) => {
                        path.push(c);
                        if segment_feasible(tracks, &path) {
                            let poles = path[1..path.len() - 1].to_vec();
                            let d = path[1..].iter().fold((0, 0), |(h, v), &b| {
                                let (dh, dv) = tracks.branches[b].displacement;
                                (h + dh, v + dv)
                            });
                            arcs.push(RunArc { from: r, to: c, poles, displacement: d });
                        }
                        path.pop();
                    }
                    BranchKind::Pole(p) => next_pole = Some((c, p)),
                }
            }
            let Some((c, p)) = next_pole else { break };
            path.push(c);
            if !segment_feasible(tracks, &path) {
                break;
            }
            if path.len() - 1 >= run_cap {
                match track.poles[p].direction {
                    Direction::Down => unbounded_down = true,
                    Direction::Up => unbounded_up = true,
                }
                break;
            }
        }
    }
    let n = rungs.len();
    let edges: Vec<(usize, usize, i64)> = arcs.iter().map(|a| (index[&a.from], index[&a.to], a.displacement.1)).collect();
    let ladders = track.ladders.len() as i64;
    let scale = |m: Q| m * qi(ladders);
    let min_slope = if unbounded_down { None } else { min_cycle_mean(n, &edges).map(scale) };
    let neg: Vec<_> = edges.iter().map(|&(a, b, w)| (a, b, -w)).collect();
    let max_slope = if unbounded_up { None } else { min_cycle_mean(n, &neg).map(|m| scale(-m)) };

    let mut obstruction = Obstruction::default();
    if let Some(lo) = &min_slope {
        obstruction.below = Some(Ray { bound: lo.clone(), inclusive: false, kind: BoundKind::Descent });
    }
    if let Some(hi) = &max_slope {
        obstruction.above = Some(Ray { bound: hi.clone(), inclusive: false, kind: BoundKind::Descent });
    }
    if unbounded_down || unbounded_up {
        obstruction.notes.push(format!("a feasible ladderpole run reached {run_cap} branches; that side is unbounded"));
    }
    DescentReport { arcs, run_cap, unbounded_down, unbounded_up, min_slope, max_slope, obstruction }
}

/// Karp's minimum cycle mean; `None` for an acyclic graph.
pub fn min_cycle_mean(n: usize, edges: &[(usize, usize, i64)]) -> Option<Q> {
    if n == 0 {
        return None;
    }
    // d[k][v]: least weight of a walk with exactly k edges ending at v
    let mut d: Vec<Vec<Option<i64>>> = vec![vec![Some(0); n]];
    for k in 1..=n {
        let mut row = vec![None; n];
        for &(a, b, w) in edges {
            if let Some(x) = d[k - 1][a] {
                let y = x + w;
                if row[b].map_or(true, |z| y < z) {
                    row[b] = Some(y);
                }
            }
        }
        d.push(row);
    }
    let mut best: Option<Q> = None;
    for v in 0..n {
        let Some(dn) = d[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| d[k][v].map(|dk| Q::new((dn - dk).into(), ((n - k) as i64).into())))
            .max()?;
        if best.as_ref().map_or(true, |b| worst < *b) {
            best = Some(worst);
        }
    }
    best
}

/// Which side of the reference slope a solution should lie on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    Above,
    Below,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnealParams {
    /// Interior breakpoints per edge, at evenly spaced inputs.
    pub grid: usize,
    pub seed: u64,
    pub initial_temperature: f64,
    pub cooling: f64,
    /// Proposals between cooling steps.
    pub cool_every: usize,
    pub proposals: usize,
    pub restarts: usize,
    /// Steps per trace when scoring a state (floating point).
    pub trace_steps: usize,
    /// Steps per trace when certifying (exact).
    pub certify_steps: usize,
}

impl Default for AnnealParams {
    fn default() -> AnnealParams {
        AnnealParams {
            grid: 4,
            seed: 1,
            initial_temperature: 0.5,
            cooling: 0.995,
            cool_every: 100,
            proposals: 100_000,
            restarts: 8,
            trace_steps: 300,
            certify_steps: 600,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum AnnealOutcome {
    Success {
        solution: HolonomySolution,
        sign: Sign,
        windows: Vec<SlopeWindow>,
        restart: usize,
        proposals: usize,
    },
    /// Not found within the budget; evidence only, never an obstruction.
    Failure { restarts: usize, proposals: usize, best_energy: f64 },
}

/// Per-edge PL maps in floating point, used only to steer the search.
#[derive(Clone, Debug)]
struct State {
    /// ys[e] holds the images of the interior grid points of edge e.
    ys: Vec<Vec<f64>>,
}

struct Problem<'a> {
    tracks: &'a Tracks,
    grid: usize,
    /// Seeds per cusp: (branch, height).
    seeds: Vec<Vec<usize>>,
    target: Target,
    s: f64,
    trace_steps: usize,
}

const SEED_HEIGHT: (i64, i64) = (1, 3);

impl Problem<'_> {
    fn xs(&self, e: usize) -> Vec<f64> {
        let n = self.tracks.fan_sizes[e].0 as f64;
        (0..=self.grid + 1).map(|i| n * i as f64 / (self.grid + 1) as f64).collect()
    }

    fn full_ys(&self, st: &State, e: usize) -> Vec<f64> {
        let m = self.tracks.fan_sizes[e].1 as f64;
        std::iter::once(0.0).chain(st.ys[e].iter().copied()).chain(std::iter::once(m)).collect()
    }

    fn energy(&self, st: &State) -> f64 {
        let maps: Vec<(Vec<f64>, Vec<f64>)> =
            (0..self.tracks.fan_sizes.len()).map(|e| (self.xs(e), self.full_ys(st, e))).collect();
        let mut worst = f64::NEG_INFINITY;
        for seeds in &self.seeds {
            for &b in seeds {
                let t = SEED_HEIGHT.0 as f64 / SEED_HEIGHT.1 as f64;
                let e = match float_window(self.tracks, &maps, b, t, self.trace_steps) {
                    None => 10.0,
                    Some((lo, hi)) => match self.target {
                        Target::Below => hi - self.s,
                        Target::Above => self.s - lo,
                    },
                };
                worst = worst.max(e);
            }
        }
        worst
    }

    fn exact(&self, st: &State) -> Option<HolonomySolution> {
        let mut maps = Vec::new();
        for (e, &(n, m)) in self.tracks.fan_sizes.iter().enumerate() {
            let pts: Vec<(Q, Q)> = st.ys[e]
                .iter()
                .enumerate()
                .map(|(i, &y)| (Q::new(((i + 1) as i64 * n as i64).into(), ((self.grid + 1) as i64).into()), from_f64_grid(y, 24)))
                .collect();
            maps.push(PLMap::through(n as i64, m as i64, &pts).ok()?);
        }
        Some(HolonomySolution { maps })
    }

    fn certify(&self, st: &State, steps: usize) -> Option<(HolonomySolution, Sign, Vec<SlopeWindow>)> {
        let sol = self.exact(st)?;
        let s = Q::new(((self.s * 1e6).round() as i64).into(), 1_000_000.into());
        let t = Q::new(SEED_HEIGHT.0.into(), SEED_HEIGHT.1.into());
        let mut windows = Vec::new();
        for seeds in &self.seeds {
            let seeds: Vec<(usize, Q)> = seeds.iter().map(|&b| (b, t.clone())).collect();
            windows.push(slope_window(self.tracks, &sol, &seeds, steps).ok()?);
        }
        let sign = sign_certificate(&windows, &s);
        let wanted = match self.target {
            Target::Below => Sign::Below,
            Target::Above => Sign::Above,
        };
        (sign == wanted).then_some((sol, sign, windows))
    }
}

fn float_eval(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&p| p <= x).clamp(1, xs.len() - 1);
    let (x0, x1, y0, y1) = (xs[i - 1], xs[i], ys[i - 1], ys[i]);
    y0 + (x - x0) * (y1 - y0) / (x1 - x0)
}

/// Floating-point twin of `trace_window`; `None` when there is no horizontal progress.
fn float_window(tracks: &Tracks, maps: &[(Vec<f64>, Vec<f64>)], start: usize, t: f64, steps: usize) -> Option<(f64, f64)> {
    let (mut b, mut t) = (start, t);
    let (mut h, mut v) = (0i64, 0i64);
    let (mut prev_v, mut delta) = (0i64, 0i64);
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for _ in 0..steps {
        let (dh, dv) = tracks.branches[b].displacement;
        h += dh;
        v += dv;
        if dh != 0 {
            delta = delta.max((v - prev_v).abs());
            prev_v = v;
            let bnd = (delta + 2) as f64;
            lo = lo.max((v as f64 - bnd) / h as f64);
            hi = hi.min((v as f64 + bnd) / h as f64);
        }
        let end = tracks.branches[b].head_end();
        let sw = &tracks.switches[end.vertex];
        let (xs, ys) = &maps[sw.edge];
        let y = end.pos as f64 + t;
        let z = match end.side {
            Side::A => float_eval(xs, ys, y),
            Side::B => float_eval(ys, xs, y),
        };
        let out = sw.side(end.side.other());
        let pos = (z.floor().max(0.0) as usize).min(out.len() - 1);
        t = (z - pos as f64).clamp(1e-12, 1.0 - 1e-12);
        b = out[pos];
    }
    (h > 0).then_some((lo, hi))
}

fn anneal_restart(p: &Problem, params: &AnnealParams, restart: usize) -> (Option<(HolonomySolution, Sign, Vec<SlopeWindow>, usize)>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ restart as u64);
    let edges = p.tracks.fan_sizes.len();
    let mut st = State {
        ys: (0..edges)
            .map(|e| {
                let m = p.tracks.fan_sizes[e].1 as f64;
                (1..=params.grid).map(|i| m * i as f64 / (params.grid + 1) as f64).collect()
            })
            .collect(),
    };
    let mut energy = p.energy(&st);
    let mut best = energy;
    let mut temp = params.initial_temperature;
    for step in 0..params.proposals {
        if energy < 0.0 {
            if let Some((sol, sign, w)) = p.certify(&st, params.certify_steps) {
                return (Some((sol, sign, w, step)), energy);
            }
        }
        let e = rng.gen_range(0..edges);
        let i = rng.gen_range(0..params.grid);
        let full = p.full_ys(&st, e);
        let (a, b) = (full[i], full[i + 2]);
        let old = st.ys[e][i];
        let width = (b - a) * temp.max(0.05);
        let proposal = (old + rng.gen_range(-width..width)).clamp(a + (b - a) * 1e-3, b - (b - a) * 1e-3);
        st.ys[e][i] = proposal;
        let ne = p.energy(&st);
        let accept = ne <= energy || rng.gen::<f64>() < ((energy - ne) / temp.max(1e-9)).exp();
        if accept {
            energy = ne;
            best = best.min(energy);
        } else {
            st.ys[e][i] = old;
        }
        if (step + 1) % params.cool_every == 0 {
            temp *= params.cooling;
        }
    }
    (None, best)
}

/// Simulated annealing over PL solutions whose slope lies on the requested
/// side of `s`; any success is certified exactly. Restarts run in parallel
/// with independent streams and the first success in restart order wins.
pub fn anneal(tracks: &Tracks, s: &Q, target: Target, params: &AnnealParams) -> AnnealOutcome {
    let seeds: Vec<Vec<usize>> = tracks
        .cusps
        .iter()
        .map(|c| c.ladders[0].rungs.iter().copied().take(3).collect())
        .collect();
    let p = Problem { tracks, grid: params.grid, seeds, target, s: to_f64(s), trace_steps: params.trace_steps };
    let runs: Vec<_> = (0..params.restarts).into_par_iter().map(|r| anneal_restart(&p, params, r)).collect();
    let mut best_energy = f64::INFINITY;
    for (r, (hit, e)) in runs.into_iter().enumerate() {
        best_energy = best_energy.min(e);
        if let Some((solution, sign, windows, proposals)) = hit {
            return AnnealOutcome::Success { solution, sign, windows, restart: r, proposals };
        }
    }
    AnnealOutcome::Failure { restarts: params.restarts, proposals: params.proposals, best_energy }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepBudget {
    /// Largest denominator of a swept slope.
    pub denominator_cap: i64,
    /// Per-slope curve search budget.
    pub curves: Budget,
    /// Annealing runs for the two signs relative to slope 0, if wanted.
    pub anneal: Option<AnnealParams>,
}

impl Default for SweepBudget {
    fn default() -> SweepBudget {
        SweepBudget {
            denominator_cap: 12,
            curves: Budget { max_length: 40, max_nodes: 200_000, ..Budget::default() },
            anneal: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnealEvidence {
    pub target: Target,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub reference: Q,
    pub certified: bool,
    pub windows: Vec<SlopeWindow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspReport {
    pub cusp: usize,
    pub ladders: usize,
    pub two_ladder: bool,
    /// Certified slopes, ascending, each with a replayable certificate.
    pub realizable: Vec<RealizationCertificate>,
    /// Swept slopes for which the search ran out of budget.
    pub exhausted: Vec<SlopeValue>,
    pub obstruction: Obstruction,
    pub descent: DescentSummary,
    /// Everything neither certified nor obstructed.
    pub unknown: String,
    pub anneal: Vec<AnnealEvidence>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentSummary {
    pub arcs: usize,
    pub run_cap: usize,
    #[serde(serialize_with = "ser_opt_q")]
    pub min_slope: Option<Q>,
    #[serde(serialize_with = "ser_opt_q")]
    pub max_slope: Option<Q>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverReport {
    pub signature: String,
    pub cusps: Vec<CuspReport>,
    /// The degeneracy slope, never realizable.
    pub degeneracy: SlopeValue,
    pub budget: SweepBudget,
    pub version: &'static str,
}

impl CuspReport {
    pub fn realizable_slopes(&self) -> Vec<SlopeValue> {
        self.realizable.iter().map(|c| c.slope).collect()
    }
}

/// Continued-fraction depth of p/q in the Stern–Brocot tree.
fn stern_brocot_depth(p: i64, q: i64) -> i64 {
    let (mut a, mut b) = (p.abs(), q);
    let mut depth = 0;
    while b != 0 {
        depth += a / b;
        (a, b) = (b, a % b);
    }
    depth
}

/// Reduced fractions with denominator at most `cap` in the closed range, in
/// Stern–Brocot order (shallowest first, then by value).
pub fn sweep_slopes(lo: &Q, hi: &Q, cap: i64) -> Vec<SlopeValue> {
    let mut out = Vec::new();
    for q in 1..=cap {
        let start = (lo * qi(q)).ceil().to_integer();
        let end = (hi * qi(q)).floor().to_integer();
        let (start, end): (i64, i64) = (start.try_into().unwrap_or(i64::MIN / 4), end.try_into().unwrap_or(i64::MAX / 4));
        for p in start..=end {
            if num_integer::Integer::gcd(&p, &q) == 1 {
                out.push(SlopeValue::new(p, q));
            }
        }
    }
    out.sort_by_key(|s| match *s {
        SlopeValue::Finite { num, den } => (stern_brocot_depth(num, den), *s),
        SlopeValue::Infinity => (i64::MAX, *s),
    });
    out
}

fn describe_unknown(obs: &Obstruction, realizable: &[SlopeValue]) -> String {
    let lo = obs.below.as_ref().map(|r| (fmt_q(&r.bound), if r.inclusive { "(" } else { "[" }));
    let hi = obs.above.as_ref().map(|r| (fmt_q(&r.bound), if r.inclusive { ")" } else { "]" }));
    let (l, lb) = lo.unwrap_or(("-inf".into(), "("));
    let (h, hb) = hi.unwrap_or(("inf".into(), ")"));
    let points: Vec<String> = realizable.iter().map(ToString::to_string).collect();
    if points.is_empty() {
        format!("{lb}{l}, {h}{hb}")
    } else {
        format!("{lb}{l}, {h}{hb} minus {{{}}}", points.join(", "))
    }
}

/// Obstructions, a slope sweep between them, and optional annealing, per cusp.
pub fn realizable_interval(signature: &str, tracks: &Tracks, budget: &SweepBudget) -> Result<SolverReport> {
    let mut cusps = Vec::new();
    for c in 0..tracks.cusps.len() {
        let descent = descent_bound(tracks, c);
        let obstruction = milnor_wood_bound(tracks, c).union(descent.obstruction.clone());
        let lo = obstruction.below.as_ref().map_or(qi(-4), |r| r.bound.clone());
        let hi = obstruction.above.as_ref().map_or(qi(4), |r| r.bound.clone());
        let slopes: Vec<SlopeValue> = sweep_slopes(&lo, &hi, budget.denominator_cap)
            .into_iter()
            .filter(|s| !obstruction.contains(&s.to_rational().unwrap()))
            .collect();
        let results: Vec<Result<(SlopeValue, Realization)>> = slopes
            .par_iter()
            .map(|&s| Ok((s, realize_slope(tracks, c, s, &budget.curves)?)))
            .collect();
        let mut realizable = Vec::new();
        let mut exhausted = Vec::new();
        for r in results {
            match r? {
                (_, Realization::Certified(cert)) => realizable.push(*cert),
                (s, Realization::Exhausted { .. }) => exhausted.push(s),
            }
        }
        realizable.sort_by_key(|c| c.slope);
        exhausted.sort();
        for cert in &realizable {
            if obstruction.contains(&cert.slope.to_rational().unwrap()) {
                return Err(Error::Infeasible(format!("slope {} is both certified and obstructed", cert.slope)));
            }
        }
        let mut anneal_runs = Vec::new();
        if let Some(params) = &budget.anneal {
            for target in [Target::Below, Target::Above] {
                let outcome = anneal(tracks, &qi(0), target, params);
                let (certified, windows) = match outcome {
                    AnnealOutcome::Success { windows, .. } => (true, windows),
                    AnnealOutcome::Failure { .. } => (false, Vec::new()),
                };
                anneal_runs.push(AnnealEvidence { target, reference: qi(0), certified, windows });
            }
        }
        let slopes: Vec<SlopeValue> = realizable.iter().map(|c| c.slope).collect();
        cusps.push(CuspReport {
            cusp: c,
            ladders: tracks.cusps[c].ladders.len(),
            two_ladder: is_two_ladder(tracks, c),
            unknown: describe_unknown(&obstruction, &slopes),
            realizable,
            exhausted,
            obstruction,
            descent: DescentSummary {
                arcs: descent.arcs.len(),
                run_cap: descent.run_cap,
                min_slope: descent.min_slope,
                max_slope: descent.max_slope,
            },
            anneal: anneal_runs,
        });
    }
    Ok(SolverReport {
        signature: signature.to_string(),
        cusps,
        degeneracy: SlopeValue::Infinity,
        budget: budget.clone(),
        version: env!("CARGO_PKG_VERSION"),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SurgeryReport {
    pub basis: PeripheralBasis,
    pub degeneracy_coefficient: Coefficient,
    /// Chart interval strictly between the extreme certified slopes.
    pub admissible_chart: Option<(SlopeValue, SlopeValue)>,
    pub admissible: Vec<String>,
    pub obstructed: Vec<String>,
    /// Coefficients whose status the solver cannot decide.
    pub unknown: String,
    #[serde(skip)]
    obstruction: Obstruction,
}

impl SurgeryReport {
    fn chart(&self, c: &Q) -> Option<Q> {
        coefficient_to_chart(Some(c), &self.basis).expect("basis checked")
    }

    /// Surgery along coefficient c gives a flow with a transverse foliation.
    pub fn is_admissible(&self, c: &Q) -> bool {
        match (self.chart(c), &self.admissible_chart) {
            (Some(s), Some((a, b))) => {
                let (a, b) = (a.to_rational().unwrap(), b.to_rational().unwrap());
                a < s && s < b
            }
            _ => false,
        }
    }

    /// Surgery along c gives a flow with no transverse foliation: every
    /// slope on one side of c, up to the degeneracy slope, is obstructed.
    pub fn is_obstructed(&self, c: &Q) -> bool {
        self.chart(c).is_some_and(|s| self.obstruction.contains(&s))
    }
}

/// Image of a chart interval under the coefficient map, as text.
fn image_text(basis: &PeripheralBasis, a: Option<&Q>, a_closed: bool, b: Option<&Q>, b_closed: bool) -> String {
    let c = |s: Option<&Q>| convert_rational(s, basis).expect("basis checked");
    let show = |x: &Option<Q>, left: bool| x.as_ref().map_or(if left { "-inf" } else { "inf" }.to_string(), fmt_q);
    let (ca, cb) = (c(a), c(b));
    // the map is monotone on each side of its pole; orient endpoints
    let increasing = conversion_orientation(basis) > 0;
    let (x, xc, y, yc) = if increasing { (ca, a_closed, cb, b_closed) } else { (cb, b_closed, ca, a_closed) };
    let pole = coefficient_to_chart(None, basis).expect("basis checked");
    let crosses = match (&pole, a, b) {
        (Some(p), a, b) => a.map_or(true, |a| a < p) && b.map_or(true, |b| p < b),
        _ => false,
    };
    let open = |closed: bool, l: bool| match (closed, l) {
        (true, true) => "[",
        (false, true) => "(",
        (true, false) => "]",
        (false, false) => ")",
    };
    if crosses {
        format!("{}{}, inf) u (-inf, {}{}", open(xc, true), show(&x, true), show(&y, false), open(yc, false))
    } else {
        format!("{}{}, {}{}", open(xc && x.is_some(), true), show(&x, true), show(&y, false), open(yc && y.is_some(), false))
    }
}

pub fn surgery_report(report: &SolverReport, cusp: usize, basis: &PeripheralBasis) -> Result<SurgeryReport> {
    let d = basis.det();
    if d.abs() != 1 {
        return Err(Error::NotUnimodular(d));
    }
    let cr = report.cusps.get(cusp).ok_or_else(|| Error::Malformed(format!("no cusp {cusp}")))?;
    let slopes = cr.realizable_slopes();
    let admissible_chart = (slopes.len() >= 2).then(|| (slopes[0], slopes[slopes.len() - 1]));
    let mut admissible = Vec::new();
    if let Some((a, b)) = admissible_chart {
        admissible.push(image_text(basis, a.to_rational().as_ref(), false, b.to_rational().as_ref(), false));
    }
    let obs = &cr.obstruction;
    let mut obstructed = Vec::new();
    if let Some(r) = &obs.below {
        obstructed.push(image_text(basis, None, false, Some(&r.bound), r.inclusive));
    }
    if let Some(r) = &obs.above {
        obstructed.push(image_text(basis, Some(&r.bound), r.inclusive, None, false));
    }
    // the undecided range starts where an obstruction ray stops
    let lo = obs.below.as_ref().map(|r| r.bound.clone());
    let hi = obs.above.as_ref().map(|r| r.bound.clone());
    let lo_closed = obs.below.as_ref().is_some_and(|r| !r.inclusive);
    let hi_closed = obs.above.as_ref().is_some_and(|r| !r.inclusive);
    let mut unknown = Vec::new();
    match admissible_chart {
        Some((a, b)) => {
            unknown.push(image_text(basis, lo.as_ref(), lo_closed, a.to_rational().as_ref(), true));
            unknown.push(image_text(basis, b.to_rational().as_ref(), true, hi.as_ref(), hi_closed));
        }
        None => unknown.push(image_text(basis, lo.as_ref(), lo_closed, hi.as_ref(), hi_closed)),
    }
    Ok(SurgeryReport {
        basis: *basis,
        degeneracy_coefficient: convert_slope(SlopeValue::Infinity, basis)?,
        admissible_chart,
        admissible,
        obstructed,
        unknown: unknown.join(" u "),
        obstruction: obs.clone(),
    })
}
