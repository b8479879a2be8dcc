//! Exact piecewise-linear maps, circle lifts, leaf tracing and slope windows.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::Serialize;

use crate::cusp::Tracks;
use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, Q};
use crate::slope::SlopeValue;
use crate::triangulation::Side;

/// Cap on breakpoints produced by composition.
pub const MAX_BREAKPOINTS: usize = 10_000;

/// Strictly increasing PL map between closed intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PLMap {
    #[serde(serialize_with = "crate::rational::ser_points")]
    points: Vec<(Q, Q)>,
}

impl PLMap {
    pub fn new(mut points: Vec<(Q, Q)>) -> Result<PLMap> {
        if points.len() < 2 {
            return Err(Error::Pl("a PL map needs at least two breakpoints".into()));
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::Pl(format!(
                    "breakpoints not strictly increasing at ({}, {})",
                    fmt_q(&w[1].0),
                    fmt_q(&w[1].1)
                )));
            }
        }
        normalize(&mut points);
        Ok(PLMap { points })
    }

    pub fn linear(n: i64, m: i64) -> PLMap {
        PLMap { points: vec![(qi(0), qi(0)), (qi(n), qi(m))] }
    }

    pub fn identity(n: i64) -> PLMap {
        PLMap::linear(n, n)
    }

    /// Through (0,0), the given interior pairs in any order, and (n,m).
    pub fn through(n: i64, m: i64, pairs: &[(Q, Q)]) -> Result<PLMap> {
        let mut pts: Vec<(Q, Q)> = pairs.to_vec();
        pts.sort();
        pts.dedup();
        pts.insert(0, (qi(0), qi(0)));
        pts.push((qi(n), qi(m)));
        PLMap::new(pts)
    }

    pub fn points(&self) -> &[(Q, Q)] {
        &self.points
    }
    pub fn domain(&self) -> (&Q, &Q) {
        (&self.points[0].0, &self.points[self.points.len() - 1].0)
    }
    pub fn codomain(&self) -> (&Q, &Q) {
        (&self.points[0].1, &self.points[self.points.len() - 1].1)
    }

    pub fn evaluate(&self, x: &Q) -> Result<Q> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(Error::Pl(format!("{} outside the domain", fmt_q(x))));
        }
        Ok(eval_sorted(&self.points, x, |p| &p.0, |p| &p.1))
    }

    pub fn invert(&self) -> PLMap {
        PLMap { points: self.points.iter().map(|(x, y)| (y.clone(), x.clone())).collect() }
    }

    /// `self ∘ g`; requires g's codomain to equal self's domain.
    pub fn compose(&self, g: &PLMap) -> Result<PLMap> {
        if self.domain() != g.codomain() {
            return Err(Error::Pl("domain mismatch in composition".into()));
        }
        let ginv = g.invert();
        let mut xs: Vec<Q> = g.points.iter().map(|p| p.0.clone()).collect();
        for (x, _) in &self.points {
            xs.push(ginv.evaluate(x)?);
        }
        xs.sort();
        xs.dedup();
        if xs.len() > MAX_BREAKPOINTS {
            return Err(Error::Pl(format!("composition exceeds {MAX_BREAKPOINTS} breakpoints")));
        }
        let pts = xs
            .into_iter()
            .map(|x| {
                let y = self.evaluate(&g.evaluate(&x)?)?;
                Ok((x, y))
            })
            .collect::<Result<Vec<_>>>()?;
        PLMap::new(pts)
    }
}

fn eval_sorted<T>(pts: &[T], x: &Q, key: impl Fn(&T) -> &Q, val: impl Fn(&T) -> &Q) -> Q {
    let i = match pts.binary_search_by(|p| key(p).cmp(x)) {
        Ok(i) => return val(&pts[i]).clone(),
        Err(i) => i,
    };
    let (a, b) = (&pts[i - 1], &pts[i]);
    let (x0, x1, y0, y1) = (key(a), key(b), val(a), val(b));
    y0 + (x - x0) * (y1 - y0) / (x1 - x0)
}

/// Drops interior breakpoints where the slope does not change.
fn normalize(points: &mut Vec<(Q, Q)>) {
    let mut out: Vec<(Q, Q)> = Vec::with_capacity(points.len());
    for p in points.drain(..) {
        while out.len() >= 2 {
            let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
            if (&b.1 - &a.1) * (&p.0 - &b.0) == (&p.1 - &b.1) * (&b.0 - &a.0) {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    *points = out;
}

/// A lift F of a circle homeomorphism, F(x + 1) = F(x) + 1, stored on [0, 1].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleLift {
    period: PLMap,
}

impl CircleLift {
    pub fn new(period: PLMap) -> Result<CircleLift> {
        let (a, b) = period.domain();
        let (c, d) = period.codomain();
        if !a.is_zero() || *b != qi(1) || d - c != qi(1) {
            return Err(Error::Pl("not a lift of a circle map: need F on [0,1] with F(1) = F(0) + 1".into()));
        }
        Ok(CircleLift { period })
    }

    pub fn rotation(r: Q) -> CircleLift {
        CircleLift { period: PLMap { points: vec![(qi(0), r.clone()), (qi(1), r + qi(1))] } }
    }

    pub fn identity() -> CircleLift {
        CircleLift::rotation(qi(0))
    }

    pub fn period(&self) -> &PLMap {
        &self.period
    }

    pub fn evaluate(&self, x: &Q) -> Q {
        let k = x.floor();
        let y = self.period.evaluate(&(x - &k)).expect("fractional part lies in [0,1]");
        y + k
    }

    fn inverse_eval(&self, y: &Q) -> Q {
        // F^{-1}(y) = F|[0,1]^{-1}(y - k) + k, choosing k so y - k lies in F([0,1])
        let f0 = &self.period.points[0].1;
        let k = (y - f0).floor();
        let x = eval_sorted(&self.period.points, &(y - &k), |p| &p.1, |p| &p.0);
        x + k
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &CircleLift) -> Result<CircleLift> {
        let mut xs: Vec<Q> = g.period.points.iter().map(|p| p.0.clone()).collect();
        let (g0, g1) = g.period.codomain();
        for (bx, _) in &self.period.points {
            // breakpoints of self at bx + k inside g([0,1])
            let mut k = (g0 - bx).ceil();
            while &(bx + &k) <= g1 {
                xs.push(g.inverse_eval(&(bx + &k)));
                k += qi(1);
            }
        }
        xs.retain(|x| *x >= qi(0) && *x <= qi(1));
        xs.sort();
        xs.dedup();
        if xs.len() > MAX_BREAKPOINTS {
            return Err(Error::Pl(format!("composition exceeds {MAX_BREAKPOINTS} breakpoints")));
        }
        let pts = xs.into_iter().map(|x| {
            let y = self.evaluate(&g.evaluate(&x));
            (x, y)
        });
        CircleLift::new(PLMap::new(pts.collect())?)
    }

    pub fn power(&self, n: u32) -> Result<CircleLift> {
        let mut acc = CircleLift::identity();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }
}

/// Bounds on the translation number: the range of (Fⁿ(x) - x)/n, which is
/// attained at breakpoints of Fⁿ.
pub fn rotation_bounds(f: &CircleLift, n: u32) -> Result<(Q, Q)> {
    if n == 0 {
        return Err(Error::Pl("iteration count must be positive".into()));
    }
    let g = f.power(n)?;
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for (x, y) in g.period().points() {
        let d = y - x;
        if lo.as_ref().map_or(true, |l| d < *l) {
            lo = Some(d.clone());
        }
        if hi.as_ref().map_or(true, |h| d > *h) {
            hi = Some(d);
        }
    }
    let n = qi(n.into());
    Ok((lo.unwrap() / &n, hi.unwrap() / n))
}

/// One increasing map [0, n_e] → [0, m_e] per edge, fan A to fan B.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HolonomySolution {
    pub maps: Vec<PLMap>,
}

impl HolonomySolution {
    pub fn linear(tracks: &Tracks) -> HolonomySolution {
        HolonomySolution { maps: tracks.fan_sizes.iter().map(|&(n, m)| PLMap::linear(n as i64, m as i64)).collect() }
    }

    pub fn validate(&self, tracks: &Tracks) -> Result<()> {
        if self.maps.len() != tracks.fan_sizes.len() {
            return Err(Error::Pl("one map per edge is required".into()));
        }
        for (e, (f, &(n, m))) in self.maps.iter().zip(&tracks.fan_sizes).enumerate() {
            if f.domain() != (&qi(0), &qi(n as i64)) || f.codomain() != (&qi(0), &qi(m as i64)) {
                return Err(Error::Pl(format!("map for edge {e} does not match its fans")));
            }
        }
        Ok(())
    }

    /// Text form: one line per edge, breakpoints as `x:y` tokens.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (e, f) in self.maps.iter().enumerate() {
            let pts: Vec<String> = f.points().iter().map(|(x, y)| format!("{}:{}", fmt_q(x), fmt_q(y))).collect();
            s.push_str(&format!("{e} {}\n", pts.join(" ")));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Termination {
    Closed,
    StepCap,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafTrace {
    pub start_branch: usize,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub start_height: Q,
    /// Branches entered after the start, with their heights.
    pub steps: Vec<(usize, String)>,
    /// Cumulative displacement after each ladder-0 rung (each horizontal unit).
    pub laps: Vec<(i64, i64)>,
    pub displacement: (i64, i64),
    pub termination: Termination,
}

/// Follows a leaf with the flow from height `t` on branch `start`.
pub fn trace_leaf(tracks: &Tracks, sol: &HolonomySolution, start: usize, t: &Q, max_steps: usize) -> Result<LeafTrace> {
    if *t <= qi(0) || *t >= qi(1) {
        return Err(Error::IntegerHeight { branch: start });
    }
    let mut b = start;
    let mut h = t.clone();
    let mut disp = (0i64, 0i64);
    let mut steps = Vec::new();
    let mut laps = Vec::new();
    let mut termination = Termination::StepCap;
    for _ in 0..max_steps {
        let (dh, dv) = tracks.branches[b].displacement;
        disp = (disp.0 + dh, disp.1 + dv);
        if dh != 0 {
            laps.push(disp);
        }
        let end = tracks.branches[b].head_end();
        let sw = &tracks.switches[end.vertex];
        let y = qi(end.pos as i64) + &h;
        let f = &sol.maps[sw.edge];
        let z = match end.side {
            Side::A => f.evaluate(&y)?,
            Side::B => f.invert().evaluate(&y)?,
        };
        if z.is_integer() {
            return Err(Error::IntegerHeight { branch: b });
        }
        let pos = z.floor();
        let next_h = &z - &pos;
        let pos: usize = num_traits::ToPrimitive::to_usize(pos.numer()).unwrap();
        b = sw.side(end.side.other())[pos];
        h = next_h;
        if b == start && h == *t {
            termination = Termination::Closed;
            break;
        }
        steps.push((b, fmt_q(&h)));
    }
    Ok(LeafTrace { start_branch: start, start_height: t.clone(), steps, laps, displacement: disp, termination })
}

/// A certified slope interval; `Infinity` when no horizontal progress was seen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SlopeWindow {
    Interval {
        #[serde(serialize_with = "crate::rational::ser_q")]
        lo: Q,
        #[serde(serialize_with = "crate::rational::ser_q")]
        hi: Q,
    },
    Infinity,
}

impl SlopeWindow {
    pub fn contains(&self, s: &Q) -> bool {
        match self {
            SlopeWindow::Interval { lo, hi } => lo <= s && s <= hi,
            SlopeWindow::Infinity => false,
        }
    }
    pub fn contains_slope(&self, s: SlopeValue) -> bool {
        match (self, s.to_rational()) {
            (SlopeWindow::Infinity, None) => true,
            (_, Some(q)) => self.contains(&q),
            _ => false,
        }
    }
}

/// Window from one trace: exact if the leaf closed; otherwise the
/// intersection over laps i of v_i/h_i ± B_i/h_i, where B_i is 2 plus the
/// largest vertical displacement seen over a single horizontal unit so far.
pub fn trace_window(trace: &LeafTrace) -> SlopeWindow {
    if trace.termination == Termination::Closed {
        let (h, v) = trace.displacement;
        return if h == 0 { SlopeWindow::Infinity } else { exact(v, h) };
    }
    if trace.laps.is_empty() {
        return SlopeWindow::Infinity;
    }
    let mut prev_v = 0;
    let mut delta = 0;
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for &(h, v) in &trace.laps {
        delta = delta.max((v - prev_v).abs());
        prev_v = v;
        let b = delta + 2;
        let l = Q::new((v - b).into(), h.into());
        let u = Q::new((v + b).into(), h.into());
        if lo.as_ref().map_or(true, |x| l > *x) {
            lo = Some(l);
        }
        if hi.as_ref().map_or(true, |x| u < *x) {
            hi = Some(u);
        }
    }
    SlopeWindow::Interval { lo: lo.unwrap(), hi: hi.unwrap() }
}

fn exact(v: i64, h: i64) -> SlopeWindow {
    let s = Q::new(v.into(), h.into());
    SlopeWindow::Interval { lo: s.clone(), hi: s }
}

/// Hull of the windows of traces from each seed (branch, height) of one cusp.
pub fn slope_window(tracks: &Tracks, sol: &HolonomySolution, seeds: &[(usize, Q)], max_steps: usize) -> Result<SlopeWindow> {
    let mut out: Option<SlopeWindow> = None;
    for (b, t) in seeds {
        let w = trace_window(&trace_leaf(tracks, sol, *b, t, max_steps)?);
        out = Some(match (out, w) {
            (None, w) => w,
            (Some(SlopeWindow::Infinity), _) | (_, SlopeWindow::Infinity) => SlopeWindow::Infinity,
            (Some(SlopeWindow::Interval { lo, hi }), SlopeWindow::Interval { lo: l, hi: h }) => {
                SlopeWindow::Interval { lo: lo.min(l), hi: hi.max(h) }
            }
        });
    }
    out.ok_or_else(|| Error::Pl("at least one seed is required".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Above,
    Below,
    Inconclusive,
}

/// Compares per-cusp windows with a reference slope.
pub fn sign_certificate(windows: &[SlopeWindow], s: &Q) -> Sign {
    let side = |w: &SlopeWindow| match w {
        SlopeWindow::Interval { lo, hi } => {
            if lo > s {
                Some(Ordering::Greater)
            } else if hi < s {
                Some(Ordering::Less)
            } else {
                None
            }
        }
        SlopeWindow::Infinity => None,
    };
    let sides: Vec<_> = windows.iter().map(side).collect();
    if !sides.is_empty() && sides.iter().all(|x| *x == Some(Ordering::Greater)) {
        Sign::Above
    } else if !sides.is_empty() && sides.iter().all(|x| *x == Some(Ordering::Less)) {
        Sign::Below
    } else {
        Sign::Inconclusive
    }
}

/// Default seeds: the middle of every branch of the cusp.
pub fn default_seeds(tracks: &Tracks, cusp: usize) -> Vec<(usize, Q)> {
    tracks.cusps[cusp].branches.iter().map(|&b| (b, Q::new(1.into(), 2.into()))).collect()
}
