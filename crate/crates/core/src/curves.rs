//! Closed curves carried by a cusp train track, the order constraints they
//! put on the edge maps, and exact realizability.
//!
//! A curve runs with the flow through a cyclic list of branches. Traversal i
//! has its own height variable t_i ∈ (0, 1) inside the face of its branch.
//! At the switch between traversals i and i+1 the curve enters on the
//! incoming side at fan position `in_pos` and leaves at `out_pos`; that pass
//! says the edge map sends `in_pos + t_i` to `out_pos + t_{i+1}` (or the
//! reverse, when the incoming side is fan B).

use std::collections::{BTreeMap, VecDeque};
use std::time::Instant;

use num_rational::BigRational;
use serde::Serialize;

use crate::constraints::{check_realizable, direct_conflict, Certificate, ConstraintSet, Height, Pair};
use crate::cusp::{BranchKind, Tracks};
use crate::error::{Error, Result};
use crate::holonomy::{trace_leaf, HolonomySolution, PLMap, Termination};
use crate::slope::{slope_of_class, SlopeValue};
use crate::triangulation::Side;

/// Non-negative weight on every branch (indexed by global branch id).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightSystem(pub Vec<u32>);

impl WeightSystem {
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&w| u64::from(w)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    /// The switch condition at every vertex.
    pub fn satisfies_switches(&self, tracks: &Tracks) -> bool {
        tracks.switches.iter().all(|sw| {
            let sum = |s: Side| sw.side(s).iter().map(|&b| u64::from(self.0[b])).sum::<u64>();
            sum(Side::A) == sum(Side::B)
        })
    }

    pub fn class(&self, tracks: &Tracks) -> (i64, i64) {
        self.0.iter().enumerate().fold((0, 0), |(h, v), (b, &w)| {
            let (dh, dv) = tracks.branches[b].displacement;
            (h + i64::from(w) * dh, v + i64::from(w) * dv)
        })
    }
}

/// Passage through the switch at `vertex`, from the branch before to the branch after.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Pass {
    pub vertex: usize,
    pub edge: usize,
    pub in_side: Side,
    pub in_pos: usize,
    pub out_pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CarriedCurve {
    pub cusp: usize,
    /// Branches in order of traversal with the flow.
    pub branches: Vec<usize>,
    /// passes[i] leads from branches[i] into branches[i + 1] (cyclically).
    pub passes: Vec<Pass>,
    pub class: (i64, i64),
}

impl CarriedCurve {
    pub fn new(tracks: &Tracks, branches: Vec<usize>) -> Result<CarriedCurve> {
        if branches.is_empty() {
            return Err(Error::NotCarried("empty curve".into()));
        }
        let n = branches.len();
        let mut passes = Vec::with_capacity(n);
        for i in 0..n {
            let (b, c) = (branches[i], branches[(i + 1) % n]);
            passes.push(pass_between(tracks, b, c).ok_or_else(|| {
                Error::NotCarried(format!("branch {c} does not follow branch {b} through a switch"))
            })?);
        }
        let class = branches.iter().fold((0, 0), |(h, v), &b| {
            let (dh, dv) = tracks.branches[b].displacement;
            (h + dh, v + dv)
        });
        let cusp = tracks.cusp_of_vertex(passes[0].vertex);
        Ok(CarriedCurve { cusp, branches, passes, class })
    }

    pub fn slope(&self) -> Result<SlopeValue> {
        slope_of_class(self.class)
    }

    pub fn weights(&self, tracks: &Tracks) -> WeightSystem {
        let mut w = vec![0; tracks.branches.len()];
        for &b in &self.branches {
            w[b] += 1;
        }
        WeightSystem(w)
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Same curve started at its least rotation, for comparisons.
    pub fn canonical(&self, tracks: &Tracks) -> CarriedCurve {
        let n = self.branches.len();
        let best = (0..n)
            .min_by(|&i, &j| {
                let a = self.branches[i..].iter().chain(&self.branches[..i]);
                let b = self.branches[j..].iter().chain(&self.branches[..j]);
                a.cmp(b)
            })
            .unwrap_or(0);
        let mut b = self.branches.clone();
        b.rotate_left(best);
        CarriedCurve::new(tracks, b).expect("rotation of a carried curve")
    }
}

fn pass_between(tracks: &Tracks, b: usize, c: usize) -> Option<Pass> {
    let head = tracks.branches[b].head_end();
    let tail = tracks.branches[c].tail_end();
    if head.vertex != tail.vertex || head.side == tail.side {
        return None;
    }
    Some(Pass {
        vertex: head.vertex,
        edge: tracks.switches[head.vertex].edge,
        in_side: head.side,
        in_pos: head.pos,
        out_pos: tail.pos,
    })
}

/// How passes are grouped: all passes at an edge share one map; passes at
/// one switch must merely not cross (embeddedness).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pooling {
    Edge,
    Vertex,
}

fn pass_pair(p: &Pass, from_var: usize, to_var: usize) -> Pair {
    let inp = Height { offset: p.in_pos as u32, var: from_var };
    let out = Height { offset: p.out_pos as u32, var: to_var };
    match p.in_side {
        Side::A => Pair { a: inp, b: out },
        Side::B => Pair { a: out, b: inp },
    }
}

fn pool_key(p: &Pass, pooling: Pooling) -> usize {
    match pooling {
        Pooling::Edge => p.edge,
        Pooling::Vertex => p.vertex,
    }
}

/// One variable per traversal; pass i links t_i and t_{i+1}.
pub fn curve_constraints(curve: &CarriedCurve, pooling: Pooling) -> ConstraintSet {
    let n = curve.branches.len();
    let mut groups: BTreeMap<usize, Vec<Pair>> = BTreeMap::new();
    for (i, p) in curve.passes.iter().enumerate() {
        groups.entry(pool_key(p, pooling)).or_default().push(pass_pair(p, i, (i + 1) % n));
    }
    ConstraintSet { num_vars: n, groups }
}

/// Constraints of an open walk: pass i links t_i and t_{i+1}, no closing pass.
pub fn path_constraints(tracks: &Tracks, path: &[usize], pooling: Pooling) -> Result<ConstraintSet> {
    let mut groups: BTreeMap<usize, Vec<Pair>> = BTreeMap::new();
    for (i, w) in path.windows(2).enumerate() {
        let p = pass_between(tracks, w[0], w[1])
            .ok_or_else(|| Error::NotCarried(format!("branch {} does not follow branch {}", w[1], w[0])))?;
        groups.entry(pool_key(&p, pooling)).or_default().push(pass_pair(&p, i, i + 1));
    }
    Ok(ConstraintSet { num_vars: path.len(), groups })
}

/// Interpolates each edge through the pairs of a feasible assignment.
pub fn extend_to_solution(tracks: &Tracks, cs: &ConstraintSet, heights: &[BigRational]) -> Result<HolonomySolution> {
    let mut maps = Vec::with_capacity(tracks.fan_sizes.len());
    for (e, &(n, m)) in tracks.fan_sizes.iter().enumerate() {
        let pairs: Vec<_> = cs
            .groups
            .get(&e)
            .map(|ps| ps.iter().map(|p| (p.a.value(heights), p.b.value(heights))).collect())
            .unwrap_or_default();
        let f = PLMap::through(n as i64, m as i64, &pairs)
            .map_err(|err| Error::Infeasible(format!("edge {e}: {err}")))?;
        maps.push(f);
    }
    Ok(HolonomySolution { maps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Cap on the weight of any branch.
    pub max_weight: u32,
    /// Multiples k·(h, v) requested; see `realize_slope`.
    pub max_multiple: u32,
    /// Longest curve (number of branch traversals) tried.
    pub max_length: usize,
    /// Search nodes before giving up.
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { max_weight: 20, max_multiple: 3, max_length: 96, max_nodes: 20_000_000 }
    }
}

struct Walker<'a> {
    tracks: &'a Tracks,
    target: (i64, i64),
    pooling: Pooling,
    max_weight: u32,
    /// Walks start at `start` and may only use eligible branches.
    start: usize,
    eligible: Vec<bool>,
    /// dist[v]: fewest branches from switch v back to the tail of `start`.
    dist: Vec<usize>,
    max_dv: i64,
    nodes: u64,
    max_nodes: u64,
    walk: Vec<usize>,
    counts: Vec<u32>,
    pairs: Vec<(usize, Pair)>,
}

enum Visit {
    Continue,
    Stop,
}

impl<'a> Walker<'a> {
    fn feasible(&self) -> bool {
        let mut groups: BTreeMap<usize, Vec<Pair>> = BTreeMap::new();
        for (k, p) in &self.pairs {
            groups.entry(*k).or_default().push(*p);
        }
        let cs = ConstraintSet { num_vars: self.walk.len(), groups };
        check_realizable(&cs).is_feasible()
    }

    /// Depth-first over walks of exactly `len` traversals; calls `found` on
    /// each closed walk of the target class whose constraints are feasible.
    fn dfs(&mut self, len: usize, h: i64, v: i64, found: &mut dyn FnMut(&[usize]) -> bool) -> Visit {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Visit::Stop;
        }
        let last = *self.walk.last().unwrap();
        let head = self.tracks.branches[last].head_end();
        let sw = &self.tracks.switches[head.vertex];
        if self.walk.len() == len {
            if head.vertex != self.tracks.branches[self.start].tail_end().vertex || (h, v) != self.target {
                return Visit::Continue;
            }
            if is_proper_power(&self.walk) {
                return Visit::Continue;
            }
            let p = pass_between(self.tracks, last, self.start).expect("closing pass");
            self.pairs.push((pool_key(&p, self.pooling), pass_pair(&p, len - 1, 0)));
            let ok = self.feasible();
            self.pairs.pop();
            if ok && !found(&self.walk) {
                return Visit::Stop;
            }
            return Visit::Continue;
        }
        let rem = len - self.walk.len();
        let out_side = head.side.other();
        for &c in sw.side(out_side) {
            if !self.eligible[c] || self.counts[c] >= self.max_weight {
                continue;
            }
            let (dh, dv) = self.tracks.branches[c].displacement;
            let (nh, nv) = (h + dh, v + dv);
            let rem_after = rem - 1;
            if nh > self.target.0 || (self.target.0 - nh) as usize > rem_after {
                continue;
            }
            if (self.target.1 - nv).abs() > self.max_dv * rem_after as i64 {
                continue;
            }
            let next = self.tracks.branches[c].head_end().vertex;
            if self.dist[next] > rem_after {
                continue;
            }
            let p = pass_between(self.tracks, last, c).expect("outgoing branch");
            let i = self.walk.len();
            let (key, pair) = (pool_key(&p, self.pooling), pass_pair(&p, i - 1, i));
            if self.pairs.iter().any(|(k, q)| *k == key && direct_conflict(&pair, q)) {
                continue;
            }
            self.pairs.push((key, pair));
            self.walk.push(c);
            self.counts[c] += 1;
            if self.feasible() {
                if let Visit::Stop = self.dfs(len, nh, nv, found) {
                    self.counts[c] -= 1;
                    self.walk.pop();
                    self.pairs.pop();
                    return Visit::Stop;
                }
            }
            self.counts[c] -= 1;
            self.walk.pop();
            self.pairs.pop();
        }
        Visit::Continue
    }
}

fn is_proper_power(w: &[usize]) -> bool {
    let n = w.len();
    (1..n).any(|d| n % d == 0 && (d..n).all(|i| w[i] == w[i - d]))
}

/// Fewest branches (with the flow) from each switch to `target`.
fn distances_to(tracks: &Tracks, target: usize) -> Vec<usize> {
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); tracks.switches.len()];
    for br in &tracks.branches {
        rev[br.head_end().vertex].push(br.tail_end().vertex);
    }
    let mut dist = vec![usize::MAX; tracks.switches.len()];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for &u in &rev[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Outcome of a bounded curve search.
#[derive(Clone, Debug, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_length_reached: usize,
    pub exhausted_nodes: bool,
}

/// Walks every closed carried curve of class `target` on the cusp, in order
/// of length, then start branch. Stops early when `found` returns false.
pub fn search_curves(
    tracks: &Tracks,
    cusp: usize,
    target: (i64, i64),
    pooling: Pooling,
    budget: &Budget,
    found: &mut dyn FnMut(&[usize]) -> bool,
) -> SearchStats {
    let track = &tracks.cusps[cusp];
    let max_dv = track.branches.iter().map(|&b| tracks.branches[b].displacement.1.abs()).max().unwrap_or(0);
    let in_ladder0 = |b: usize| tracks.branches[b].kind == BranchKind::Rung(0);
    // with horizontal progress every curve crosses a ladder-0 rung; start at
    // the least one it uses, otherwise at its least branch
    let starts: Vec<usize> = if target.0 > 0 {
        track.branches.iter().copied().filter(|&b| in_ladder0(b)).collect()
    } else {
        track.branches.clone()
    };
    let mut stats = SearchStats { nodes: 0, max_length_reached: 0, exhausted_nodes: false };
    let min_len = target.0.max(1) as usize;
    for len in min_len..=budget.max_length {
        stats.max_length_reached = len;
        for &s in &starts {
            let eligible = (0..tracks.branches.len())
                .map(|b| {
                    tracks.cusp_of_vertex(tracks.branches[b].ends[0].vertex) == cusp
                        && if target.0 > 0 { !in_ladder0(b) || b >= s } else { b >= s }
                })
                .collect();
            let mut w = Walker {
                tracks,
                target,
                pooling,
                max_weight: budget.max_weight,
                start: s,
                eligible,
                dist: distances_to(tracks, tracks.branches[s].tail_end().vertex),
                max_dv,
                nodes: stats.nodes,
                max_nodes: budget.max_nodes,
                walk: vec![s],
                counts: vec![0; tracks.branches.len()],
                pairs: Vec::new(),
            };
            w.counts[s] = 1;
            let (h0, v0) = tracks.branches[s].displacement;
            let stop = matches!(w.dfs(len, h0, v0, found), Visit::Stop);
            stats.nodes = w.nodes;
            if stats.nodes > budget.max_nodes {
                stats.exhausted_nodes = true;
                return stats;
            }
            if stop {
                return stats;
            }
        }
    }
    stats
}

/// Weight systems of the embedded closed carried curves of class `class`
/// with every branch weight at most `max_weight`, sorted by total weight and
/// then lexicographically. Curves are enumerated up to `budget.max_length`.
///
/// On a torus an embedded multicurve is a union of parallel copies of one
/// primitive curve, so connected curves of primitive classes are the
/// interesting case; the zero class yields nothing.
pub fn enumerate_weight_systems(tracks: &Tracks, cusp: usize, class: (i64, i64), budget: &Budget) -> Vec<WeightSystem> {
    if class == (0, 0) || class.0 < 0 {
        return Vec::new();
    }
    let mut out: Vec<WeightSystem> = Vec::new();
    search_curves(tracks, cusp, class, Pooling::Vertex, budget, &mut |walk| {
        let mut w = vec![0; tracks.branches.len()];
        for &b in walk {
            w[b] += 1;
        }
        out.push(WeightSystem(w));
        true
    });
    out.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

/// Order-preserving resolution: strand k on one side of a switch continues
/// as strand k on the other side.
pub fn weights_to_multicurve(tracks: &Tracks, weights: &WeightSystem) -> Result<Vec<CarriedCurve>> {
    if !weights.satisfies_switches(tracks) {
        return Err(Error::NotCarried("switch condition fails".into()));
    }
    let w = &weights.0;
    // global index of strand s of branch b among the strands on one side
    let offset = |vertex: usize, side: Side, pos: usize| -> u32 {
        tracks.switches[vertex].side(side)[..pos].iter().map(|&x| w[x]).sum()
    };
    let locate = |vertex: usize, side: Side, mut k: u32| -> (usize, u32) {
        for &x in tracks.switches[vertex].side(side) {
            if k < w[x] {
                return (x, k);
            }
            k -= w[x];
        }
        unreachable!("switch condition")
    };
    let mut seen: BTreeMap<(usize, u32), ()> = BTreeMap::new();
    let mut out = Vec::new();
    for b in 0..w.len() {
        for s in 0..w[b] {
            if seen.contains_key(&(b, s)) {
                continue;
            }
            let mut branches = Vec::new();
            let (mut cb, mut cs) = (b, s);
            while seen.insert((cb, cs), ()).is_none() {
                branches.push(cb);
                let head = tracks.branches[cb].head_end();
                let k = offset(head.vertex, head.side, head.pos) + cs;
                (cb, cs) = locate(head.vertex, head.side.other(), k);
            }
            out.push(CarriedCurve::new(tracks, branches)?);
        }
    }
    Ok(out)
}

/// A closed carried curve together with a feasible assignment and the
/// holonomy solution it extends to.
#[derive(Clone, Debug, Serialize)]
pub struct RealizationCertificate {
    pub slope: SlopeValue,
    pub curve: CarriedCurve,
    pub constraints: ConstraintSet,
    #[serde(serialize_with = "crate::rational::ser_vec")]
    pub heights: Vec<BigRational>,
    pub solution: HolonomySolution,
}

impl RealizationCertificate {
    /// Re-checks every claim: the constraints come from the curve, the
    /// heights satisfy them, and the solution's leaf through the curve closes
    /// on exactly the curve's branch sequence.
    pub fn replay(&self, tracks: &Tracks) -> Result<()> {
        let cs = curve_constraints(&self.curve, Pooling::Edge);
        if cs.groups != self.constraints.groups {
            return Err(Error::Infeasible("constraints do not match the curve".into()));
        }
        if !crate::constraints::verify_heights(&cs, &self.heights) {
            return Err(Error::Infeasible("heights violate the constraints".into()));
        }
        self.solution.validate(tracks)?;
        let fresh = extend_to_solution(tracks, &cs, &self.heights)?;
        if fresh != self.solution {
            return Err(Error::Infeasible("solution is not the interpolation of the heights".into()));
        }
        let n = self.curve.len();
        let tr = trace_leaf(tracks, &self.solution, self.curve.branches[0], &self.heights[0], n + 1)?;
        let visited: Vec<usize> =
            std::iter::once(self.curve.branches[0]).chain(tr.steps.iter().map(|s| s.0)).collect();
        if tr.termination != Termination::Closed || visited != self.curve.branches || tr.displacement != self.curve.class {
            return Err(Error::Infeasible("traced leaf does not reproduce the curve".into()));
        }
        if slope_of_class(tr.displacement)? != self.slope {
            return Err(Error::Infeasible("traced slope differs".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum Realization {
    Certified(Box<RealizationCertificate>),
    /// Nothing found within the bounds; not evidence of non-realizability.
    Exhausted { budget: Budget, stats: SearchStats, seconds: f64 },
}

/// Looks for a closed carried curve of the given slope whose edge
/// constraints are feasible, shortest first.
///
/// Only k = 1 is searched even when `max_multiple` is larger: a closed leaf
/// is an embedded curve on the torus, hence primitive, and the components of
/// an embedded curve of class k·(h, v) are parallel curves of class (h, v)
/// with smaller weights, each realizable whenever the whole is.
pub fn realize_slope(tracks: &Tracks, cusp: usize, slope: SlopeValue, budget: &Budget) -> Result<Realization> {
    let started = Instant::now();
    let (h, v) = slope.primitive_class();
    if h == 0 {
        return Err(Error::Malformed("the degeneracy slope is never the slope of a solution".into()));
    }
    let mut hit: Option<Vec<usize>> = None;
    let stats = search_curves(tracks, cusp, (h, v), Pooling::Edge, budget, &mut |walk| {
        hit = Some(walk.to_vec());
        false
    });
    let Some(walk) = hit else {
        return Ok(Realization::Exhausted { budget: *budget, stats, seconds: started.elapsed().as_secs_f64() });
    };
    let curve = CarriedCurve::new(tracks, walk)?;
    let constraints = curve_constraints(&curve, Pooling::Edge);
    let heights = match check_realizable(&constraints) {
        Certificate::Feasible { heights } => heights,
        Certificate::Infeasible { .. } => return Err(Error::Infeasible("search accepted an infeasible curve".into())),
    };
    let solution = extend_to_solution(tracks, &constraints, &heights)?;
    let cert = RealizationCertificate { slope, curve, constraints, heights, solution };
    cert.replay(tracks)?;
    Ok(Realization::Certified(Box::new(cert)))
}

/// Looks for heights under which every pair at `edge` lies on the graph of
/// `f` (so f itself can serve as that edge's map) while all other groups stay
/// strictly comonotone. Free variables range over multiples of 1/grid; any
/// result is verified exactly, so `Some` is a proof and `None` is not.
pub fn fit_edge_map(cs: &ConstraintSet, edge: usize, f: &PLMap, grid: u32) -> Option<Vec<BigRational>> {
    let n = cs.num_vars;
    let finv = f.invert();
    // var x at offset ox maps to var y at offset oy: t_y = f(ox + t_x) - oy
    let mut links: Vec<Vec<(usize, u32, u32, bool)>> = vec![Vec::new(); n];
    for p in cs.groups.get(&edge).map(Vec::as_slice).unwrap_or(&[]) {
        links[p.a.var].push((p.b.var, p.a.offset, p.b.offset, true));
        links[p.b.var].push((p.a.var, p.b.offset, p.a.offset, false));
    }
    let mut t: Vec<Option<BigRational>> = vec![None; n];
    let mut nodes = 0u64;
    fit_search(cs, &links, f, &finv, grid, &mut t, &mut nodes)
}

fn fit_search(
    cs: &ConstraintSet,
    links: &[Vec<(usize, u32, u32, bool)>],
    f: &PLMap,
    finv: &PLMap,
    grid: u32,
    t: &mut Vec<Option<BigRational>>,
    nodes: &mut u64,
) -> Option<Vec<BigRational>> {
    let Some(x) = t.iter().position(Option::is_none) else {
        let full: Vec<BigRational> = t.iter().map(|v| v.clone().unwrap()).collect();
        return crate::constraints::verify_heights(cs, &full).then_some(full);
    };
    for k in 1..grid {
        *nodes += 1;
        if *nodes > 2_000_000 {
            return None;
        }
        let saved = t.clone();
        t[x] = Some(BigRational::new(k.into(), grid.into()));
        if propagate_fit(links, f, finv, t, x) && partial_ok(cs, t) {
            if let Some(sol) = fit_search(cs, links, f, finv, grid, t, nodes) {
                return Some(sol);
            }
        }
        *t = saved;
    }
    None
}

fn propagate_fit(
    links: &[Vec<(usize, u32, u32, bool)>],
    f: &PLMap,
    finv: &PLMap,
    t: &mut [Option<BigRational>],
    start: usize,
) -> bool {
    let (zero, one) = (BigRational::from_integer(0.into()), BigRational::from_integer(1.into()));
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        let tx = t[x].clone().unwrap();
        for &(y, ox, oy, forward) in &links[x] {
            let g = if forward { f } else { finv };
            let Ok(img) = g.evaluate(&(BigRational::from_integer(ox.into()) + &tx)) else { return false };
            let ty = img - BigRational::from_integer(oy.into());
            if ty <= zero || ty >= one {
                return false;
            }
            match &t[y] {
                Some(v) if *v != ty => return false,
                Some(_) => {}
                None => {
                    t[y] = Some(ty);
                    stack.push(y);
                }
            }
        }
    }
    true
}

/// Strict comonotonicity among pairs whose variables are all assigned.
fn partial_ok(cs: &ConstraintSet, t: &[Option<BigRational>]) -> bool {
    let val = |h: &Height| t[h.var].as_ref().map(|v| BigRational::from_integer(h.offset.into()) + v);
    cs.groups.values().all(|pairs| {
        let known: Vec<_> = pairs
            .iter()
            .filter_map(|p| Some((p, val(&p.a)?, val(&p.b)?)))
            .collect();
        known.iter().enumerate().all(|(i, (p, a, b))| {
            known[i + 1..].iter().all(|(q, c, d)| p == q || (a < c && b < d) || (a > c && b > d))
        })
    })
}
