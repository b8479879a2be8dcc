//! Cusp tori, their boundary train tracks, ladders and chart coordinates.
//!
//! Vertices of a cusp triangulation are ends of edges of the triangulation,
//! branches are corners of faces, and triangles are corners of tetrahedra.
//! Ids are global over the whole triangulation: vertex `2e + end`, branch
//! `3 * face + k`, triangle `4 * tet + v`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::edge_number;
use crate::triangulation::{EdgeColor, Side, VeeringTriangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BranchEnd {
    pub vertex: usize,
    pub side: Side,
    /// 0-based position in the fan on that side.
    pub pos: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchKind {
    /// Lies on the given ladderpole.
    Pole(usize),
    /// A rung of the given ladder.
    Rung(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub face: usize,
    pub ends: [BranchEnd; 2],
    /// The triangles on either side.
    pub triangles: [usize; 2],
    pub kind: BranchKind,
    /// For pole branches, the index into `ends` of the lower end.
    pub lower: usize,
    /// Index into `ends` where carried curves enter this branch.
    pub tail: usize,
    /// Chart displacement when traversed from tail to head.
    pub displacement: (i64, i64),
}

impl Branch {
    pub fn tail_end(&self) -> BranchEnd {
        self.ends[self.tail]
    }
    pub fn head_end(&self) -> BranchEnd {
        self.ends[1 - self.tail]
    }
    pub fn other_vertex(&self, v: usize) -> usize {
        if self.ends[0].vertex == v {
            self.ends[1].vertex
        } else {
            self.ends[0].vertex
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Switch {
    pub edge: usize,
    pub end: u8,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    /// The side through which carried curves arrive.
    pub incoming: Side,
    pub cusp: usize,
}

impl Switch {
    pub fn side(&self, s: Side) -> &[usize] {
        match s {
            Side::A => &self.side_a,
            Side::B => &self.side_b,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspTriangle {
    pub tet: usize,
    pub vertex: u8,
    /// Vertex ids in the positive cyclic order.
    pub corners: [usize; 3],
    /// `branches[i]` joins `corners[i]` and `corners[(i + 1) % 3]`.
    pub branches: [usize; 3],
    /// `ends[end_index[i]]` of `branches[i]` sits at `corners[i]`.
    pub end_index: [usize; 3],
    /// The tetrahedron face containing `branches[i]`.
    pub faces: [u8; 3],
    pub pi_corner: usize,
    pub cusp: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Ladderpole {
    /// Vertices in upward order; `branches[i]` joins `vertices[i]` to `vertices[i + 1]`.
    pub vertices: Vec<usize>,
    pub branches: Vec<usize>,
    pub direction: Direction,
}

#[derive(Clone, Debug, Serialize)]
pub struct Ladder {
    pub left: usize,
    pub right: usize,
    /// Triangles in upward cyclic order.
    pub triangles: Vec<usize>,
    /// `rungs[i]` is the upper rung of `triangles[i]`.
    pub rungs: Vec<usize>,
}

/// Chart coordinates: h counts signed crossings of ladder 0 (one per rung
/// traversed left to right), v counts signed crossings of a horizontal dual
/// loop through the ladders.
#[derive(Clone, Debug, Serialize)]
pub struct Chart {
    /// The horizontal dual loop: triangles visited, starting in ladder 0.
    pub horizontal_loop: Vec<usize>,
    /// Crossings of the horizontal loop: (branch, triangle left, sign).
    pub crossings: Vec<(usize, usize, i64)>,
    /// Signed rung crossings of the loop, per ladder (its vertical drift).
    pub drift: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspTrack {
    pub cusp: usize,
    pub vertices: Vec<usize>,
    pub branches: Vec<usize>,
    pub triangles: Vec<usize>,
    pub poles: Vec<Ladderpole>,
    /// Ladders in left-to-right cyclic order; `ladders[i].right == ladders[i + 1].left`.
    pub ladders: Vec<Ladder>,
    pub chart: Chart,
}

/// All cusp tracks of a triangulation with the shared switch data.
#[derive(Clone, Debug)]
pub struct Tracks {
    pub switches: Vec<Switch>,
    pub branches: Vec<Branch>,
    pub triangles: Vec<CuspTriangle>,
    pub cusps: Vec<CuspTrack>,
    pub fan_sizes: Vec<(usize, usize)>,
    pub edge_colors: Vec<EdgeColor>,
}

/// Picture orientation: with `false`, a triangle whose corners run
/// (bottom of pole, top of pole, apex) in the positive order has its apex on
/// the left of the pole.
const MIRROR: bool = false;

/// Maps a vertex of slot (t, f) to the face's primary slot.
fn primary_vertex(tri: &VeeringTriangulation, t: usize, f: u8, v: u8) -> u8 {
    let face = tri.face_of_slot[t][f as usize];
    if tri.faces[face].slots[0] == (t, f) {
        v
    } else {
        tri.gluings[t][f as usize].perm.apply(v)
    }
}

fn branch_id(tri: &VeeringTriangulation, t: usize, f: u8, v: u8) -> usize {
    let face = tri.face_of_slot[t][f as usize];
    let f0 = tri.faces[face].slots[0].1;
    let v0 = primary_vertex(tri, t, f, v);
    let k = (0..4u8).filter(|&w| w != f0).position(|w| w == v0).unwrap();
    3 * face + k
}

fn vertex_id(tri: &VeeringTriangulation, t: usize, v: u8, w: u8) -> usize {
    let e = edge_number(v, w);
    2 * tri.tet_edge_class[t][e] + tri.end_at(t, e, v) as usize
}

pub fn build_cusp_tracks(tri: &VeeringTriangulation) -> Result<Tracks> {
    let n = tri.num_tetrahedra();
    let n_edges = tri.num_edges();

    // switches and branch ends
    let mut switches: Vec<Switch> = Vec::with_capacity(2 * n_edges);
    let mut ends: Vec<Vec<BranchEnd>> = vec![Vec::new(); 6 * n];
    // far vertex of each end, in primary-slot coordinates
    let mut end_keys: Vec<Vec<u8>> = vec![Vec::new(); 6 * n];
    let mut branch_face = vec![usize::MAX; 6 * n];
    for (e, fan) in tri.fans.iter().enumerate() {
        for end in 0..2u8 {
            let vertex = 2 * e + end as usize;
            let mut sides = [Vec::new(), Vec::new()];
            for (s, side) in [Side::A, Side::B].into_iter().enumerate() {
                for (pos, ff) in fan.side(side).iter().enumerate() {
                    let (t, f) = ff.below;
                    let b = branch_id(tri, t, f, ff.end_vertex[end as usize]);
                    sides[s].push(b);
                    ends[b].push(BranchEnd { vertex, side, pos });
                    end_keys[b].push(primary_vertex(tri, t, f, ff.end_vertex[1 - end as usize]));
                    branch_face[b] = ff.face;
                }
            }
            let [side_a, side_b] = sides;
            switches.push(Switch { edge: e, end, side_a, side_b, incoming: Side::A, cusp: 0 });
        }
    }
    for (b, es) in ends.iter().enumerate() {
        if es.len() != 2 {
            return Err(Error::Ladder(format!("branch {b} has {} ends", es.len())));
        }
    }

    // triangles
    let mut triangles = Vec::with_capacity(4 * n);
    let mut branch_tris: Vec<Vec<usize>> = vec![Vec::new(); 6 * n];
    for t in 0..n {
        let angle = tri.taut_angles[t];
        for v in 0..4u8 {
            let mut others: Vec<u8> = (0..4u8).filter(|&w| w != v).collect();
            let parity = crate::perm::Perm4::from_images([v, others[0], others[1], others[2]]).unwrap().sign();
            if (parity == 1) == MIRROR {
                others.swap(1, 2);
            }
            let corners = [0, 1, 2].map(|i| vertex_id(tri, t, v, others[i]));
            let mut end_index = [0; 3];
            let mut faces = [0u8; 3];
            let branches = [0, 1, 2].map(|i| {
                let a = others[i];
                let b = others[(i + 1) % 3];
                let f = (0..4u8).find(|&f| f != v && f != a && f != b).unwrap();
                let id = branch_id(tri, t, f, v);
                let key = primary_vertex(tri, t, f, a);
                end_index[i] = end_keys[id].iter().position(|&k| k == key).unwrap();
                faces[i] = f;
                id
            });
            let pi_w = others
                .iter()
                .copied()
                .find(|&w| crate::perm::pair_of_edge(edge_number(v, w)) == angle)
                .unwrap();
            let id = triangles.len();
            for &b in &branches {
                branch_tris[b].push(id);
            }
            triangles.push(CuspTriangle {
                tet: t,
                vertex: v,
                corners,
                branches,
                end_index,
                faces,
                pi_corner: vertex_id(tri, t, v, pi_w),
                cusp: 0,
            });
        }
    }

    let branches: Vec<Branch> = (0..6 * n)
        .map(|b| Branch {
            face: branch_face[b],
            ends: [ends[b][0], ends[b][1]],
            triangles: [branch_tris[b][0], branch_tris[b][1]],
            kind: BranchKind::Rung(usize::MAX),
            lower: 0,
            tail: 0,
            displacement: (0, 0),
        })
        .collect();

    // cusps: components of the triangle adjacency graph
    let mut cusp_of = vec![usize::MAX; triangles.len()];
    let mut n_cusps = 0;
    for start in 0..triangles.len() {
        if cusp_of[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        cusp_of[start] = n_cusps;
        while let Some(x) = stack.pop() {
            for &b in &triangles[x].branches {
                for &y in &branches[b].triangles {
                    if cusp_of[y] == usize::MAX {
                        cusp_of[y] = n_cusps;
                        stack.push(y);
                    }
                }
            }
        }
        n_cusps += 1;
    }
    for (i, tr) in triangles.iter_mut().enumerate() {
        tr.cusp = cusp_of[i];
    }
    for tr in &triangles {
        for &c in &tr.corners {
            switches[c].cusp = tr.cusp;
        }
    }

    let mut tracks = Tracks {
        switches,
        branches,
        triangles,
        cusps: Vec::new(),
        fan_sizes: tri.fans.iter().map(|f| (f.n(), f.m())).collect(),
        edge_colors: tri.edge_colors.clone(),
    };
    for c in 0..n_cusps {
        let cusp = tracks.build_cusp(c)?;
        tracks.cusps.push(cusp);
    }
    Ok(tracks)
}

impl Tracks {
    pub fn side_len(&self, vertex: usize, side: Side) -> usize {
        self.switches[vertex].side(side).len()
    }

    fn build_cusp(&mut self, c: usize) -> Result<CuspTrack> {
        let triangles: Vec<usize> = (0..self.triangles.len()).filter(|&i| self.triangles[i].cusp == c).collect();
        let mut vertices: Vec<usize> = triangles.iter().flat_map(|&i| self.triangles[i].corners).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut branch_list: Vec<usize> = triangles.iter().flat_map(|&i| self.triangles[i].branches).collect();
        branch_list.sort_unstable();
        branch_list.dedup();

        let (v, e, f) = (vertices.len() as i64, branch_list.len() as i64, triangles.len() as i64);
        if v - e + f != 0 || 2 * e != 3 * f {
            return Err(Error::NonTorusCusp(v - e + f));
        }

        // poles: a branch at the bottom of its side at one end and the top at the other
        let mut up_from: BTreeMap<usize, usize> = BTreeMap::new();
        let mut pole_branches = Vec::new();
        for &b in &branch_list {
            let br = &self.branches[b];
            let is_bottom = |k: usize| br.ends[k].pos == 0;
            let is_top = |k: usize| br.ends[k].pos + 1 == self.side_len(br.ends[k].vertex, br.ends[k].side);
            let forward = is_bottom(0) && is_top(1);
            let backward = is_bottom(1) && is_top(0);
            match (forward, backward) {
                (true, true) => {
                    return Err(Error::Ladder(format!("branch {b} is a pole in both directions")));
                }
                (true, false) | (false, true) => {
                    let lower = if forward { 0 } else { 1 };
                    let from = br.ends[lower].vertex;
                    if up_from.insert(from, b).is_some() {
                        return Err(Error::Ladder(format!("vertex {from} has two upward pole branches")));
                    }
                    pole_branches.push((b, lower));
                    self.branches[b].lower = lower;
                }
                _ => {}
            }
        }
        if up_from.len() != vertices.len() {
            return Err(Error::Ladder(format!(
                "{} upward pole branches for {} vertices",
                up_from.len(),
                vertices.len()
            )));
        }
        // each vertex: one pole branch leaves upward, one arrives, on opposite sides
        for &x in &vertices {
            let up = up_from[&x];
            let up_side = self.branches[up].ends[self.branches[up].lower].side;
            let arriving: Vec<usize> = pole_branches
                .iter()
                .filter(|&&(b, lower)| self.branches[b].ends[1 - lower].vertex == x)
                .map(|&(b, _)| b)
                .collect();
            if arriving.len() != 1 || {
                let a = &self.branches[arriving[0]];
                a.ends[1 - a.lower].side == up_side
            } {
                return Err(Error::Ladder(format!("vertex {x} is not a smooth point of a ladderpole")));
            }
        }

        // trace poles
        let mut pole_of_vertex: BTreeMap<usize, usize> = BTreeMap::new();
        let mut poles: Vec<Ladderpole> = Vec::new();
        for &x in &vertices {
            if pole_of_vertex.contains_key(&x) {
                continue;
            }
            let id = poles.len();
            let mut vs = Vec::new();
            let mut bs = Vec::new();
            let mut y = x;
            loop {
                if pole_of_vertex.insert(y, id).is_some() {
                    return Err(Error::Ladder("ladderpole trace does not close up".into()));
                }
                vs.push(y);
                let b = up_from[&y];
                bs.push(b);
                self.branches[b].kind = BranchKind::Pole(id);
                y = self.branches[b].ends[1 - self.branches[b].lower].vertex;
                if y == x {
                    break;
                }
            }
            poles.push(Ladderpole { vertices: vs, branches: bs, direction: Direction::Up });
        }

        // ladders: triangles joined across rungs
        let is_pole = |b: usize, brs: &Vec<Branch>| matches!(brs[b].kind, BranchKind::Pole(_));
        let mut ladder_of = BTreeMap::new();
        let mut ladder_tris: Vec<Vec<usize>> = Vec::new();
        for &t0 in &triangles {
            if ladder_of.contains_key(&t0) {
                continue;
            }
            let id = ladder_tris.len();
            let mut comp = vec![t0];
            ladder_of.insert(t0, id);
            let mut i = 0;
            while i < comp.len() {
                let t = comp[i];
                i += 1;
                for &b in &self.triangles[t].branches {
                    if is_pole(b, &self.branches) {
                        continue;
                    }
                    for &u in &self.branches[b].triangles {
                        if let std::collections::btree_map::Entry::Vacant(slot) = ladder_of.entry(u) {
                            slot.insert(id);
                            comp.push(u);
                        }
                    }
                }
            }
            ladder_tris.push(comp);
        }
        for &b in &branch_list {
            if !is_pole(b, &self.branches) {
                let [t1, t2] = self.branches[b].triangles;
                if ladder_of[&t1] != ladder_of[&t2] {
                    return Err(Error::Ladder(format!("rung {b} joins two ladders")));
                }
                self.branches[b].kind = BranchKind::Rung(ladder_of[&t1]);
            }
        }

        // each triangle: one pole edge; decide the left and right pole of each ladder
        let mut sides: Vec<(Option<usize>, Option<usize>)> = vec![(None, None); ladder_tris.len()];
        for &t in &triangles {
            let tr = &self.triangles[t];
            let pole_idx: Vec<usize> = (0..3).filter(|&i| is_pole(tr.branches[i], &self.branches)).collect();
            if pole_idx.len() != 1 {
                return Err(Error::Ladder(format!("triangle {t} has {} pole edges", pole_idx.len())));
            }
            let i = pole_idx[0];
            let b = tr.branches[i];
            let apex = tr.corners[(i + 2) % 3];
            let BranchKind::Pole(p) = self.branches[b].kind else { unreachable!() };
            let q = pole_of_vertex[&apex];
            // positive order (bottom, top, apex) puts the apex on the left
            let apex_left = tr.end_index[i] == self.branches[b].lower;
            let l = ladder_of[&t];
            let (left, right) = if apex_left { (q, p) } else { (p, q) };
            let entry = &mut sides[l];
            if entry.0.get_or_insert(left) != &left || entry.1.get_or_insert(right) != &right {
                return Err(Error::Ladder(format!("ladder {l} has inconsistent sides")));
            }
        }
        let n_ladders = ladder_tris.len();
        if n_ladders < 2 || n_ladders % 2 != 0 || n_ladders != poles.len() {
            return Err(Error::Ladder(format!("{n_ladders} ladders for {} ladderpoles", poles.len())));
        }
        let mut ladder_with_left = vec![usize::MAX; poles.len()];
        for (l, s) in sides.iter().enumerate() {
            let left = s.0.unwrap();
            if ladder_with_left[left] != usize::MAX {
                return Err(Error::Ladder(format!("pole {left} is the left side of two ladders")));
            }
            ladder_with_left[left] = l;
        }
        // order ladders left to right, starting from the ladder containing the lowest triangle
        let first = ladder_of[&triangles[0]];
        let mut order = vec![first];
        while order.len() < n_ladders {
            let right = sides[*order.last().unwrap()].1.unwrap();
            let next = ladder_with_left[right];
            if next == first || next == usize::MAX {
                return Err(Error::Ladder("ladders do not form a single cycle".into()));
            }
            order.push(next);
        }
        if ladder_with_left[sides[*order.last().unwrap()].1.unwrap()] != first {
            return Err(Error::Ladder("ladders do not form a single cycle".into()));
        }
        let mut renumber = vec![0; n_ladders];
        for (i, &l) in order.iter().enumerate() {
            renumber[l] = i;
        }
        for &b in &branch_list {
            if let BranchKind::Rung(l) = self.branches[b].kind {
                self.branches[b].kind = BranchKind::Rung(renumber[l]);
            }
        }
        let mut ladders: Vec<Ladder> = Vec::with_capacity(n_ladders);
        for &l in &order {
            let (left, right) = (sides[l].0.unwrap(), sides[l].1.unwrap());
            let (tris, rungs) = self.stack_ladder(&ladder_tris[l])?;
            ladders.push(Ladder { left, right, triangles: tris, rungs });
        }

        // flow: rungs run left to right; the side holding the right-going rungs is outgoing
        for (li, ladder) in ladders.iter().enumerate() {
            for &r in &ladder.rungs {
                let br = &self.branches[r];
                let left_end = if pole_of_vertex[&br.ends[0].vertex] == ladder.left { 0 } else { 1 };
                if pole_of_vertex[&br.ends[1 - left_end].vertex] != ladder.right {
                    return Err(Error::Ladder(format!("rung {r} of ladder {li} does not cross it")));
                }
                let _ = li;
                self.branches[r].tail = left_end;
            }
        }
        let mut incoming: BTreeMap<usize, Side> = BTreeMap::new();
        for ladder in &ladders {
            for &r in &ladder.rungs {
                let br = self.branches[r].clone();
                for (k, want) in [(br.tail, true), (1 - br.tail, false)] {
                    // at the tail the rung leaves (outgoing side); at the head it arrives
                    let end = br.ends[k];
                    let inc = if want { end.side.other() } else { end.side };
                    if *incoming.entry(end.vertex).or_insert(inc) != inc {
                        return Err(Error::Ladder(format!("switch {} is not consistently oriented", end.vertex)));
                    }
                }
            }
        }
        for &x in &vertices {
            let inc = *incoming
                .get(&x)
                .ok_or_else(|| Error::Ladder(format!("switch {x} has no rungs")))?;
            self.switches[x].incoming = inc;
        }
        for (pi, pole) in poles.iter_mut().enumerate() {
            let x = pole.vertices[0];
            let up = pole.branches[0];
            let leaves_up = self.branches[up].ends[self.branches[up].lower].side != self.switches[x].incoming;
            pole.direction = if leaves_up { Direction::Up } else { Direction::Down };
            for (i, &b) in pole.branches.iter().enumerate() {
                let lower = pole.vertices[i];
                let lower_end = self.branches[b].lower;
                let leaves = self.branches[b].ends[lower_end].side != self.switches[lower].incoming;
                if leaves != leaves_up {
                    return Err(Error::Ladder(format!("pole {pi} changes direction")));
                }
                self.branches[b].tail = if leaves_up { lower_end } else { 1 - lower_end };
            }
        }
        for ladder in &ladders {
            if poles[ladder.left].direction == poles[ladder.right].direction {
                return Err(Error::Ladder("adjacent ladderpoles have the same direction".into()));
            }
        }

        let chart = self.make_chart(&ladders, &poles)?;
        let mut track = CuspTrack { cusp: c, vertices, branches: branch_list, triangles, poles, ladders, chart };
        self.assign_displacements(&mut track);
        Ok(track)
    }

    pub fn end_at(&self, b: usize, vertex: usize) -> BranchEnd {
        let br = &self.branches[b];
        if br.ends[0].vertex == vertex {
            br.ends[0]
        } else {
            debug_assert_eq!(br.ends[1].vertex, vertex);
            br.ends[1]
        }
    }

    /// Orders a ladder's triangles upward; returns them with their upper rungs.
    fn stack_ladder(&self, tris: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let upper_rung = |t: usize| -> usize {
            let tr = &self.triangles[t];
            let i = (0..3).find(|&i| matches!(self.branches[tr.branches[i]].kind, BranchKind::Pole(_))).unwrap();
            let upward = tr.end_index[i] == self.branches[tr.branches[i]].lower;
            // the rung through the top corner of the pole edge
            if upward {
                tr.branches[(i + 1) % 3]
            } else {
                tr.branches[(i + 2) % 3]
            }
        };
        let mut out_t = vec![tris[0]];
        let mut out_r = Vec::new();
        let mut t = tris[0];
        loop {
            let r = upper_rung(t);
            out_r.push(r);
            let [a, b] = self.branches[r].triangles;
            let next = if a == t { b } else { a };
            if next == tris[0] {
                break;
            }
            if out_t.len() >= tris.len() {
                return Err(Error::Ladder("ladder does not stack into an annulus".into()));
            }
            out_t.push(next);
            t = next;
        }
        if out_t.len() != tris.len() {
            return Err(Error::Ladder("ladder does not stack into an annulus".into()));
        }
        // start the stack at the lowest triangle id for determinism
        let k = (0..out_t.len()).min_by_key(|&i| out_t[i]).unwrap();
        out_t.rotate_left(k);
        out_r.rotate_left(k);
        Ok((out_t, out_r))
    }

    fn pole_side_of(&self, t: usize) -> (usize, usize) {
        let tr = &self.triangles[t];
        let i = (0..3).find(|&i| matches!(self.branches[tr.branches[i]].kind, BranchKind::Pole(_))).unwrap();
        let BranchKind::Pole(p) = self.branches[tr.branches[i]].kind else { unreachable!() };
        (tr.branches[i], p)
    }

    /// Builds the horizontal dual loop. It enters each ladder across its left
    /// pole, climbs or descends through rungs to a triangle based on the right
    /// pole and crosses into the next ladder, closing up after one lap. The
    /// loop with the least total |drift| is used; ties go to the smaller net
    /// drift, then to the lowest entry branch.
    fn make_chart(&self, ladders: &[Ladder], _poles: &[Ladderpole]) -> Result<Chart> {
        let n = ladders.len();
        // moves out of ladder li from the triangle at index k: (exit index, signed drift, next triangle)
        let moves = |li: usize, k: usize| -> Vec<(usize, i64, usize)> {
            let ladder = &ladders[li];
            let len = ladder.triangles.len() as i64;
            let mut out = Vec::new();
            for d in -(len - 1)..len {
                let j = (k as i64 + d).rem_euclid(len) as usize;
                let t = ladder.triangles[j];
                let (exit, p) = self.pole_side_of(t);
                if p == ladder.right {
                    let [a, b] = self.branches[exit].triangles;
                    out.push((j, d, if a == t { b } else { a }));
                }
            }
            out
        };
        let index_in = |li: usize, t: usize| ladders[li].triangles.iter().position(|&x| x == t);

        type Key = (i64, i64, usize);
        let mut best: Option<(Key, Vec<(usize, usize, i64)>)> = None;
        for (k0, &t0) in ladders[0].triangles.iter().enumerate() {
            let (entry, p) = self.pole_side_of(t0);
            if p != ladders[0].left {
                continue;
            }
            // layered DP keyed by entry triangle: (sum |d|, net d, path of (ladder, start idx, d))
            let mut layer: BTreeMap<usize, (i64, i64, Vec<(usize, usize, i64)>)> = BTreeMap::new();
            layer.insert(k0, (0, 0, Vec::new()));
            for li in 0..n {
                let mut next: BTreeMap<usize, (i64, i64, Vec<(usize, usize, i64)>)> = BTreeMap::new();
                for (&k, (cost, net, path)) in &layer {
                    for (_, d, t_next) in moves(li, k) {
                        let nl = (li + 1) % n;
                        let Some(kn) = index_in(nl, t_next) else { continue };
                        if li + 1 == n && kn != k0 {
                            continue;
                        }
                        let cand = (cost + d.abs(), net + d);
                        let better = next.get(&kn).map_or(true, |(c, nt, _)| (cand.0, cand.1.abs()) < (*c, nt.abs()));
                        if better {
                            let mut p2 = path.clone();
                            p2.push((li, k, d));
                            next.insert(kn, (cand.0, cand.1, p2));
                        }
                    }
                }
                layer = next;
            }
            if let Some((cost, net, path)) = layer.remove(&k0) {
                let key = (cost, net.abs(), entry);
                if best.as_ref().map_or(true, |b| key < b.0) {
                    best = Some((key, path));
                }
            }
        }
        let (_, steps) = best.ok_or_else(|| Error::Ladder("no horizontal loop crosses each ladder once".into()))?;

        let mut path = Vec::new();
        let mut crossings = Vec::new();
        let mut drift = Vec::new();
        for (li, k, d) in steps {
            let ladder = &ladders[li];
            let len = ladder.triangles.len();
            let mut cur = k;
            path.push(ladder.triangles[cur]);
            for _ in 0..d.unsigned_abs() {
                let (rung, next) = if d > 0 {
                    (ladder.rungs[cur], (cur + 1) % len)
                } else {
                    let prev = (cur + len - 1) % len;
                    (ladder.rungs[prev], prev)
                };
                crossings.push((rung, ladder.triangles[cur], self.crossing_sign(rung, ladder.triangles[cur])));
                cur = next;
                path.push(ladder.triangles[cur]);
            }
            let from = ladder.triangles[cur];
            let (exit, _) = self.pole_side_of(from);
            crossings.push((exit, from, self.crossing_sign(exit, from)));
            drift.push(d);
        }
        Ok(Chart { horizontal_loop: path, crossings, drift })
    }

    /// +1 when a dual path leaving triangle `from` across branch `b` crosses it
    /// from the left of the branch's positive direction (as seen in `from`).
    fn crossing_sign(&self, b: usize, from: usize) -> i64 {
        // the sign is relative to traversing b from ends[0] to ends[1]
        let tr = &self.triangles[from];
        let i = tr.branches.iter().position(|&x| x == b).unwrap();
        // the positive boundary of `from` runs corners[i] -> corners[i + 1], with `from` on its left
        if tr.end_index[i] == 0 {
            1
        } else {
            -1
        }
    }

    fn assign_displacements(&mut self, track: &mut CuspTrack) {
        // v is measured along ends[0] -> ends[1] by the crossing signs
        let mut beta: BTreeMap<usize, i64> = BTreeMap::new();
        for &(b, _, s) in &track.chart.crossings {
            *beta.entry(b).or_default() += s;
        }
        for &b in &track.branches {
            let br = &mut self.branches[b];
            let v = beta.get(&b).copied().unwrap_or(0);
            let sign = if br.tail == 0 { 1 } else { -1 };
            let h = i64::from(br.kind == BranchKind::Rung(0));
            br.displacement = (h, sign * v);
        }
    }

    pub fn cusp_of_vertex(&self, v: usize) -> usize {
        self.switches[v].cusp
    }

    /// Chart displacement of a branch traversed with (`true`) or against the flow.
    pub fn step(&self, b: usize, with_flow: bool) -> (i64, i64) {
        let (h, v) = self.branches[b].displacement;
        if with_flow {
            (h, v)
        } else {
            (-h, -v)
        }
    }
}

/// Checks the structural invariants of every cusp track; returns one message
/// per violation (empty when all hold).
pub fn check_track_invariants(tri: &VeeringTriangulation, tracks: &Tracks) -> Vec<String> {
    let mut bad = Vec::new();
    let total: usize = tracks.cusps.iter().map(|c| c.vertices.len()).sum();
    if total != 2 * tri.num_edges() {
        bad.push(format!("{total} cusp vertices for {} edges", tri.num_edges()));
    }
    let mut pole_dir: BTreeMap<usize, Direction> = BTreeMap::new();
    for c in &tracks.cusps {
        let (v, e, f) = (c.vertices.len() as i64, c.branches.len() as i64, c.triangles.len() as i64);
        if v - e + f != 0 || 2 * e != 3 * f {
            bad.push(format!("cusp {}: V - E + F = {}, 2E - 3F = {}", c.cusp, v - e + f, 2 * e - 3 * f));
        }
        for p in &c.poles {
            for &x in &p.vertices {
                pole_dir.insert(x, p.direction);
            }
            let class = p.branches.iter().fold((0, 0), |(h, v), &b| {
                let br = &tracks.branches[b];
                let (dh, dv) = tracks.step(b, br.tail == br.lower);
                (h + dh, v + dv)
            });
            if class.0 != 0 || class.1.abs() != 1 {
                bad.push(format!("cusp {}: ladderpole class {class:?}", c.cusp));
            }
        }
        if let Some(&x) = c.vertices.iter().find(|x| !pole_dir.contains_key(x)) {
            bad.push(format!("cusp {}: vertex {x} on no ladderpole", c.cusp));
        }
        let n = c.ladders.len();
        if n < 2 || n % 2 == 1 {
            bad.push(format!("cusp {}: {n} ladders", c.cusp));
        }
        for (i, l) in c.ladders.iter().enumerate() {
            if l.right != c.ladders[(i + 1) % n].left {
                bad.push(format!("cusp {}: ladders {i} and {} do not share a pole", c.cusp, (i + 1) % n));
            }
            if c.poles[l.left].direction == c.poles[l.right].direction {
                bad.push(format!("cusp {}: ladder {i} has two {:?} poles", c.cusp, c.poles[l.left].direction));
            }
            let on_boundary = |x: &usize| c.poles[l.left].vertices.contains(x) || c.poles[l.right].vertices.contains(x);
            if l.triangles.iter().any(|&t| !tracks.triangles[t].corners.iter().all(on_boundary)) {
                bad.push(format!("cusp {}: ladder {i} has an interior vertex", c.cusp));
            }
        }
    }
    for e in 0..tri.num_edges() {
        if let (Some(a), Some(b)) = (pole_dir.get(&(2 * e)), pole_dir.get(&(2 * e + 1))) {
            if a != b {
                bad.push(format!("edge {e}: ends on {a:?} and {b:?} ladderpoles"));
            }
        }
    }
    bad
}
