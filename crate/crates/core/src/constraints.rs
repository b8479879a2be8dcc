//! Order constraints on fan heights.
//!
//! A pair (a, b) says the edge map sends height a (fan A) to height b (fan B),
//! where each height is an integer face offset plus a variable t ∈ (0, 1).
//! A set of pairs pooled under one key is realizable by an increasing map iff
//! any two pairs are strictly comonotone, or syntactically identical.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Height {
    pub offset: u32,
    pub var: usize,
}

impl Height {
    pub fn value(&self, t: &[BigRational]) -> BigRational {
        BigRational::from_integer(self.offset.into()) + &t[self.var]
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+t{}", self.offset, self.var)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Pair {
    pub a: Height,
    pub b: Height,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConstraintSet {
    pub num_vars: usize,
    /// Pair lists keyed by edge (or by switch, when checking embeddedness).
    pub groups: BTreeMap<usize, Vec<Pair>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    /// Two pairs whose face offsets cross strictly.
    Inversion { key: usize, p: Pair, q: Pair },
    /// Two pairs agreeing on one side but not the other.
    Coincidence { key: usize, p: Pair, q: Pair },
    /// Variables forced into a strict cycle t0 < t1 < … < t0.
    Cycle { vars: Vec<usize> },
    /// Both orders of two variables lead to contradictions.
    Split { vars: (usize, usize), less: Box<Witness>, greater: Box<Witness> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    Feasible {
        #[serde(serialize_with = "crate::rational::ser_vec")]
        heights: Vec<BigRational>,
    },
    Infeasible { witness: Witness },
}

impl Certificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Certificate::Feasible { .. })
    }
}

#[derive(Clone, Copy, Debug)]
enum Cmp {
    Forced(i8),
    Same,
    /// sign(t_x - t_y), x ≠ y
    Open(usize, usize),
}

fn compare(p: &Height, q: &Height) -> Cmp {
    if p.offset != q.offset {
        Cmp::Forced(if p.offset < q.offset { -1 } else { 1 })
    } else if p.var == q.var {
        Cmp::Same
    } else {
        Cmp::Open(p.var, q.var)
    }
}

/// Strict partial order on variables, kept transitively closed.
#[derive(Clone)]
struct Order {
    words: usize,
    /// below[x] has bit y set when t_x < t_y is implied
    below: Vec<Vec<u64>>,
}

impl Order {
    fn new(n: usize) -> Order {
        let words = n.div_ceil(64).max(1);
        Order { words, below: vec![vec![0; words]; n] }
    }
    fn less(&self, x: usize, y: usize) -> bool {
        self.below[x][y / 64] >> (y % 64) & 1 == 1
    }
    /// Adds t_x < t_y; false if that closes a cycle.
    fn add(&mut self, x: usize, y: usize) -> bool {
        if x == y || self.less(y, x) {
            return false;
        }
        if self.less(x, y) {
            return true;
        }
        let mut up = self.below[y].clone();
        up[y / 64] |= 1 << (y % 64);
        for k in 0..self.below.len() {
            if k == x || self.less(k, x) {
                for w in 0..self.words {
                    self.below[k][w] |= up[w];
                }
            }
        }
        true
    }
    /// A cycle through the attempted arc t_x < t_y, given t_y < … < t_x.
    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        // greedy walk along implied relations that still reach `to`
        let mut out = vec![from];
        let mut cur = from;
        while cur != to {
            let next = (0..self.below.len())
                .find(|&k| self.less(cur, k) && (k == to || self.less(k, to)) && !out.contains(&k))
                .unwrap_or(to);
            out.push(next);
            cur = next;
        }
        out
    }
}

struct Link {
    // sign(t_x - t_y) must equal sign(t_u - t_v)
    x: usize,
    y: usize,
    u: usize,
    v: usize,
}

enum Outcome {
    Ok(Order),
    Fail(Witness),
}

fn propagate(mut order: Order, links: &[Link]) -> Outcome {
    loop {
        let mut changed = false;
        for l in links {
            for (x, y, u, v) in [(l.x, l.y, l.u, l.v), (l.u, l.v, l.x, l.y)] {
                for (p, q, r, s) in [(x, y, u, v), (y, x, v, u)] {
                    if order.less(p, q) && !order.less(r, s) {
                        if !order.add(r, s) {
                            let mut cyc = order.path(s, r);
                            cyc.push(s);
                            return Outcome::Fail(Witness::Cycle { vars: cyc });
                        }
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Outcome::Ok(order);
        }
    }
}

fn search(order: Order, links: &[Link]) -> Outcome {
    let order = match propagate(order, links) {
        Outcome::Ok(o) => o,
        fail => return fail,
    };
    let Some(l) = links.iter().find(|l| !order.less(l.x, l.y) && !order.less(l.y, l.x)) else {
        return Outcome::Ok(order);
    };
    let mut lo = order.clone();
    // t_x < t_y, hence t_u < t_v
    let less = if lo.add(l.x, l.y) && lo.add(l.u, l.v) {
        match search(lo, links) {
            Outcome::Ok(o) => return Outcome::Ok(o),
            Outcome::Fail(w) => w,
        }
    } else {
        Witness::Cycle { vars: vec![l.u, l.v, l.u] }
    };
    let mut hi = order;
    let greater = if hi.add(l.y, l.x) && hi.add(l.v, l.u) {
        match search(hi, links) {
            Outcome::Ok(o) => return Outcome::Ok(o),
            Outcome::Fail(w) => w,
        }
    } else {
        Witness::Cycle { vars: vec![l.v, l.u, l.v] }
    };
    Outcome::Fail(Witness::Split { vars: (l.x, l.y), less: Box::new(less), greater: Box::new(greater) })
}

/// Decides the constraint set exactly. Comparisons forced by face offsets
/// become strict arcs; comparisons between two open pairs become linked
/// choices, settled by propagation and, when that stalls, case splitting.
pub fn check_realizable(cs: &ConstraintSet) -> Certificate {
    let mut order = Order::new(cs.num_vars);
    let mut links = Vec::new();
    for (&key, pairs) in &cs.groups {
        for (i, p) in pairs.iter().enumerate() {
            for q in &pairs[i + 1..] {
                let (ca, cb) = (compare(&p.a, &q.a), compare(&p.b, &q.b));
                let fail = |w| Certificate::Infeasible { witness: w };
                match (ca, cb) {
                    (Cmp::Same, Cmp::Same) => {}
                    (Cmp::Same, _) | (_, Cmp::Same) => {
                        return fail(Witness::Coincidence { key, p: *p, q: *q });
                    }
                    (Cmp::Forced(s), Cmp::Forced(r)) => {
                        if s != r {
                            return fail(Witness::Inversion { key, p: *p, q: *q });
                        }
                    }
                    (Cmp::Forced(s), Cmp::Open(x, y)) | (Cmp::Open(x, y), Cmp::Forced(s)) => {
                        let (lo, hi) = if s < 0 { (x, y) } else { (y, x) };
                        if !order.add(lo, hi) {
                            let mut cyc = order.path(hi, lo);
                            cyc.push(hi);
                            return fail(Witness::Cycle { vars: cyc });
                        }
                    }
                    (Cmp::Open(x, y), Cmp::Open(u, v)) => {
                        if (x, y) == (v, u) {
                            return fail(Witness::Cycle { vars: vec![x, y, x] });
                        }
                        if (x, y) != (u, v) {
                            links.push(Link { x, y, u, v });
                        }
                    }
                }
            }
        }
    }
    match search(order, &links) {
        Outcome::Fail(witness) => Certificate::Infeasible { witness },
        Outcome::Ok(order) => Certificate::Feasible { heights: linear_heights(&order) },
    }
}

/// Distinct heights along a linear extension: t = (rank + 1) / (n + 1).
/// Distinctness matters: two pairs comparing the same variables in the same
/// direction on both sides carry no link, yet still need t_x ≠ t_y.
fn linear_heights(order: &Order) -> Vec<BigRational> {
    let n = order.below.len();
    // in a transitively closed order, x < y implies preds(x) ⊊ preds(y)
    let preds: Vec<usize> = (0..n).map(|y| (0..n).filter(|&x| order.less(x, y)).count()).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| (preds[i], i));
    let mut t = vec![BigRational::from_integer(0.into()); n];
    for (rank, &i) in idx.iter().enumerate() {
        t[i] = BigRational::new((rank + 1).into(), (n + 1).into());
    }
    t
}

/// Substitutes heights and checks every group is strictly comonotone.
pub fn verify_heights(cs: &ConstraintSet, t: &[BigRational]) -> bool {
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    if t.len() != cs.num_vars || t.iter().any(|x| *x <= zero || *x >= one) {
        return false;
    }
    cs.groups.values().all(|pairs| {
        pairs.iter().enumerate().all(|(i, p)| {
            pairs[i + 1..].iter().all(|q| {
                if p == q {
                    return true;
                }
                let da = p.a.value(t) - q.a.value(t);
                let db = p.b.value(t) - q.b.value(t);
                (da > zero && db > zero) || (da < zero && db < zero)
            })
        })
    })
}

/// Cheap necessary test: two pairs that can never be strictly comonotone.
pub fn direct_conflict(p: &Pair, q: &Pair) -> bool {
    if p == q {
        return false;
    }
    match (compare(&p.a, &q.a), compare(&p.b, &q.b)) {
        (Cmp::Same, _) | (_, Cmp::Same) => true,
        (Cmp::Forced(s), Cmp::Forced(r)) => s != r,
        (Cmp::Open(x, y), Cmp::Open(u, v)) => (x, y) == (v, u),
        _ => false,
    }
}
