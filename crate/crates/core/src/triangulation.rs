//! Taut and veering ideal triangulations.
//!
//! Tetrahedra are relabelled on construction so that every gluing map is
//! orientation-reversing (the triangulation is oriented), which leaves the
//! taut angle digits unchanged. All later modules assume that labelling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isosig::{decode_isosig, RawGluings};
use crate::perm::{edge_number, pair_of_edge, Perm4, EDGE_VERTICES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeColor {
    Red,
    Blue,
}

impl EdgeColor {
    pub fn flip(self) -> EdgeColor {
        match self {
            EdgeColor::Red => EdgeColor::Blue,
            EdgeColor::Blue => EdgeColor::Red,
        }
    }
}

/// A face of the triangulation, named by its lower-numbered (tet, face) slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Face {
    pub slots: [(usize, u8); 2],
}

/// One face incidence around an edge, seen from the tetrahedron below it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FanFace {
    pub face: usize,
    /// (tet, face) slot of the tetrahedron directly below this face.
    pub below: (usize, u8),
    /// Vertex of `below.0` at end 0 and end 1 of the edge.
    pub end_vertex: [u8; 2],
}

/// The faces around an edge, split by its two pi-angles and ordered bottom
/// to top along the coorientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeFan {
    pub edge: usize,
    pub fan_a: Vec<FanFace>,
    pub fan_b: Vec<FanFace>,
    /// The tetrahedra whose top and bottom diagonals are this edge.
    pub below_tet: usize,
    pub above_tet: usize,
}

impl EdgeFan {
    pub fn n(&self) -> usize {
        self.fan_a.len()
    }
    pub fn m(&self) -> usize {
        self.fan_b.len()
    }
    pub fn side(&self, side: Side) -> &[FanFace] {
        match side {
            Side::A => &self.fan_a,
            Side::B => &self.fan_b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    /// (tet, tet-edge number) incidences in cyclic order around the edge.
    pub embeddings: Vec<(usize, u8)>,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.embeddings.len()
    }
}

/// A validated, oriented, transversely taut ideal triangulation.
#[derive(Clone, Debug)]
pub struct TautTriangulation {
    pub name: String,
    pub gluings: Vec<[Gluing; 4]>,
    pub taut_angles: Vec<u8>,
    /// +1 if the face is a top face of the tetrahedron, -1 if a bottom face.
    pub coorientation: Vec<[i8; 4]>,
    pub edges: Vec<EdgeClass>,
    /// Edge class of each tetrahedron edge.
    pub tet_edge_class: Vec<[usize; 6]>,
    /// The vertex of each tetrahedron edge lying at end 0 of its class.
    pub tet_edge_end0: Vec<[u8; 6]>,
    pub faces: Vec<Face>,
    pub face_of_slot: Vec<[usize; 4]>,
    pub fans: Vec<EdgeFan>,
}

#[derive(Clone, Debug)]
pub struct VeeringTriangulation {
    pub taut: TautTriangulation,
    pub edge_colors: Vec<EdgeColor>,
}

impl std::ops::Deref for VeeringTriangulation {
    type Target = TautTriangulation;
    fn deref(&self) -> &TautTriangulation {
        &self.taut
    }
}

// ---------------------------------------------------------------------------
// Native document

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingDoc {
    pub tet: usize,
    pub perm: [u8; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationDoc {
    pub name: String,
    pub tetrahedra: usize,
    pub gluings: Vec<[GluingDoc; 4]>,
    pub taut_angles: Vec<u8>,
}

impl TriangulationDoc {
    pub fn to_text(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_text(text: &str) -> Result<TriangulationDoc> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}

pub fn parse_triangulation(text: &str) -> Result<TautTriangulation> {
    let doc = TriangulationDoc::from_text(text)?;
    from_doc(&doc)
}

pub fn from_doc(doc: &TriangulationDoc) -> Result<TautTriangulation> {
    if doc.tetrahedra == 0 {
        return Err(Error::Malformed("no tetrahedra".into()));
    }
    if doc.gluings.len() != doc.tetrahedra {
        return Err(Error::Malformed(format!(
            "{} gluing rows for {} tetrahedra",
            doc.gluings.len(),
            doc.tetrahedra
        )));
    }
    if doc.taut_angles.len() != doc.tetrahedra {
        return Err(Error::DigitCount { digits: doc.taut_angles.len(), tets: doc.tetrahedra });
    }
    let mut raw: RawGluings = Vec::with_capacity(doc.tetrahedra);
    for (t, row) in doc.gluings.iter().enumerate() {
        let mut out = [(0, Perm4::IDENTITY); 4];
        for (f, g) in row.iter().enumerate() {
            if g.tet >= doc.tetrahedra {
                return Err(Error::Malformed(format!("tet {t} face {f} glued to missing tet {}", g.tet)));
            }
            let p = Perm4::from_images(g.perm)
                .ok_or_else(|| Error::Malformed(format!("tet {t} face {f}: {:?} is not a permutation", g.perm)))?;
            out[f] = (g.tet, p);
        }
        raw.push(out);
    }
    TautTriangulation::build(doc.name.clone(), raw, doc.taut_angles.clone())
}

/// Decodes `<isoSig>_<digits>`.
pub fn decode_taut_isosig(signature: &str) -> Result<TautTriangulation> {
    let (sig, digits) = signature
        .split_once('_')
        .ok_or_else(|| Error::Signature(format!("missing angle digits in {signature:?}")))?;
    let raw = decode_isosig(sig)?;
    let angles = digits
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            '2' => Ok(2),
            _ => Err(Error::Signature(format!("bad angle digit {c:?}"))),
        })
        .collect::<Result<Vec<u8>>>()?;
    if angles.len() != raw.len() {
        return Err(Error::DigitCount { digits: angles.len(), tets: raw.len() });
    }
    TautTriangulation::build(signature.to_string(), raw, angles)
}

/// Decodes a census signature and assigns veering colours.
pub fn decode_veering(signature: &str) -> Result<VeeringTriangulation> {
    VeeringTriangulation::new(decode_taut_isosig(signature)?)
}

// ---------------------------------------------------------------------------
// Construction

fn check_involution(raw: &RawGluings) -> Result<()> {
    for (t, faces) in raw.iter().enumerate() {
        for f in 0..4u8 {
            let (u, p) = faces[f as usize];
            let g = p.apply(f);
            if u == t && g == f {
                return Err(Error::NonInvolutive { tet: t, face: f });
            }
            let (back_t, back_p) = raw[u][g as usize];
            if back_t != t || back_p != p.inverse() {
                return Err(Error::NonInvolutive { tet: t, face: f });
            }
        }
    }
    Ok(())
}

/// Relabels tetrahedra so that all gluings reverse orientation. Each flipped
/// tetrahedron is relabelled by a transposition fixing its pi pair.
fn orient(raw: &RawGluings, angles: &[u8]) -> Result<RawGluings> {
    let n = raw.len();
    let mut orientation = vec![0i8; n];
    orientation[0] = 1;
    let mut stack = vec![0usize];
    while let Some(t) = stack.pop() {
        for f in 0..4 {
            let (u, p) = raw[t][f];
            let want = -p.sign() * orientation[t];
            if orientation[u] == 0 {
                orientation[u] = want;
                stack.push(u);
            } else if orientation[u] != want {
                return Err(Error::NonOrientable);
            }
        }
    }
    if orientation.iter().any(|&o| o == 0) {
        return Err(Error::Malformed("triangulation is not connected".into()));
    }
    let swap = |t: usize| -> Perm4 {
        if orientation[t] == 1 {
            return Perm4::IDENTITY;
        }
        match angles[t] {
            0 => Perm4::transposition(0, 1),
            1 => Perm4::transposition(0, 2),
            _ => Perm4::transposition(0, 3),
        }
    };
    let mut out = raw.clone();
    for t in 0..n {
        let st = swap(t);
        for f in 0..4u8 {
            let (u, p) = raw[t][f as usize];
            let su = swap(u);
            // new label i of t is old label st(i); likewise for u
            out[t][st.apply(f) as usize] = (u, su.compose(p).compose(st));
        }
    }
    Ok(out)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// The two faces of a tetrahedron containing edge {v, w}.
fn faces_containing(v: u8, w: u8) -> [u8; 2] {
    let mut out = [0u8; 2];
    let mut k = 0;
    for f in 0..4u8 {
        if f != v && f != w {
            out[k] = f;
            k += 1;
        }
    }
    out
}

fn is_pi(angle: u8, tet_edge: usize) -> bool {
    pair_of_edge(tet_edge) == angle
}

/// Per-face coorientations: +1 for top faces, -1 for bottom faces.
fn coorient(gluings: &[[Gluing; 4]], angles: &[u8]) -> Result<Vec<[i8; 4]>> {
    // pi pair k = {a,b} | {c,d}; direction +1 makes faces a, b top faces
    const SPLIT: [[u8; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
    let n = gluings.len();
    let faces_for = |angle: u8, dir: i8| -> [i8; 4] {
        let s = SPLIT[angle as usize];
        let mut c = [0i8; 4];
        c[s[0] as usize] = dir;
        c[s[1] as usize] = dir;
        c[s[2] as usize] = -dir;
        c[s[3] as usize] = -dir;
        c
    };
    let mut co: Vec<Option<[i8; 4]>> = vec![None; n];
    co[0] = Some(faces_for(angles[0], 1));
    let mut stack = vec![0usize];
    while let Some(t) = stack.pop() {
        let ct = co[t].unwrap();
        for f in 0..4u8 {
            let g = gluings[t][f as usize];
            let face_in_u = g.perm.apply(f);
            let want_face = -ct[f as usize];
            let s = SPLIT[angles[g.tet] as usize];
            let dir = if face_in_u == s[0] || face_in_u == s[1] { want_face } else { -want_face };
            let cu = faces_for(angles[g.tet], dir);
            match co[g.tet] {
                None => {
                    co[g.tet] = Some(cu);
                    stack.push(g.tet);
                }
                Some(existing) if existing != cu => return Err(Error::NotTransverse(g.tet)),
                _ => {}
            }
        }
    }
    Ok(co.into_iter().map(|c| c.unwrap()).collect())
}

impl TautTriangulation {
    fn build(name: String, raw: RawGluings, angles: Vec<u8>) -> Result<TautTriangulation> {
        let n = raw.len();
        if angles.len() != n {
            return Err(Error::DigitCount { digits: angles.len(), tets: n });
        }
        if let Some(&bad) = angles.iter().find(|&&a| a > 2) {
            return Err(Error::Malformed(format!("taut angle selector {bad} not in 0..=2")));
        }
        check_involution(&raw)?;
        let raw = orient(&raw, &angles)?;
        let gluings: Vec<[Gluing; 4]> = raw
            .iter()
            .map(|fs| {
                let mut g = [Gluing { tet: 0, perm: Perm4::IDENTITY }; 4];
                for (f, &(t, p)) in fs.iter().enumerate() {
                    g[f] = Gluing { tet: t, perm: p };
                }
                g
            })
            .collect();

        // faces
        let mut face_of_slot = vec![[usize::MAX; 4]; n];
        let mut faces = Vec::with_capacity(2 * n);
        for t in 0..n {
            for f in 0..4u8 {
                if face_of_slot[t][f as usize] != usize::MAX {
                    continue;
                }
                let g = gluings[t][f as usize];
                let other = (g.tet, g.perm.apply(f));
                let id = faces.len();
                faces.push(Face { slots: [(t, f), other] });
                face_of_slot[t][f as usize] = id;
                face_of_slot[other.0][other.1 as usize] = id;
            }
        }

        // edge classes via union-find on tet edges, tracking which vertex is which end
        let mut uf = UnionFind((0..6 * n).collect());
        for t in 0..n {
            for f in 0..4u8 {
                let g = gluings[t][f as usize];
                for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                    if a == f || b == f {
                        continue;
                    }
                    let e2 = edge_number(g.perm.apply(a), g.perm.apply(b));
                    uf.union(6 * t + e, 6 * g.tet + e2);
                }
            }
        }
        let mut class_of_root = std::collections::HashMap::new();
        let mut tet_edge_class = vec![[0usize; 6]; n];
        let mut n_edges = 0;
        for t in 0..n {
            for e in 0..6 {
                let r = uf.find(6 * t + e);
                let id = *class_of_root.entry(r).or_insert_with(|| {
                    n_edges += 1;
                    n_edges - 1
                });
                tet_edge_class[t][e] = id;
            }
        }

        // taut check: exactly two pi incidences per edge
        let mut pi_count = vec![0usize; n_edges];
        let mut degree = vec![0usize; n_edges];
        for t in 0..n {
            for e in 0..6 {
                degree[tet_edge_class[t][e]] += 1;
                if is_pi(angles[t], e) {
                    pi_count[tet_edge_class[t][e]] += 1;
                }
            }
        }
        let bad: Vec<String> = (0..n_edges)
            .filter(|&e| pi_count[e] != 2 || degree[e] < 3)
            .map(|e| format!("edge {e} has degree {} and {} pi-angles", degree[e], pi_count[e]))
            .collect();
        if !bad.is_empty() {
            return Err(Error::AngleSum(bad.join("; ")));
        }

        let coorientation = coorient(&gluings, &angles)?;

        let mut tri = TautTriangulation {
            name,
            gluings,
            taut_angles: angles,
            coorientation,
            edges: Vec::new(),
            tet_edge_class,
            tet_edge_end0: vec![[0u8; 6]; n],
            faces,
            face_of_slot,
            fans: Vec::new(),
        };
        tri.walk_edges(n_edges)?;
        Ok(tri)
    }

    pub fn num_tetrahedra(&self) -> usize {
        self.gluings.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Walks around every edge from the tetrahedron having it as top diagonal,
    /// producing cyclic embeddings, end labels and the two fans.
    fn walk_edges(&mut self, n_edges: usize) -> Result<()> {
        let n = self.num_tetrahedra();
        let mut start: Vec<Option<(usize, usize)>> = vec![None; n_edges];
        for t in 0..n {
            for e in 0..6 {
                let (a, b) = EDGE_VERTICES[e];
                let [f1, f2] = faces_containing(a, b);
                let top = self.coorientation[t][f1 as usize] == 1 && self.coorientation[t][f2 as usize] == 1;
                if is_pi(self.taut_angles[t], e) && top {
                    let c = self.tet_edge_class[t][e];
                    if start[c].is_none() {
                        start[c] = Some((t, e));
                    }
                }
            }
        }
        let mut end0_set = vec![[false; 6]; n];
        for c in 0..n_edges {
            let (t0, e0) = start[c].ok_or_else(|| Error::AngleSum(format!("edge {c} is not the top diagonal of any tetrahedron")))?;
            let (v0, w0) = EDGE_VERTICES[e0];
            let mut fans: Vec<Vec<FanFace>> = Vec::new();
            let mut side_embeddings: Vec<Vec<(usize, u8)>> = Vec::new();
            let mut top_tet = None;
            for first_face in faces_containing(v0, w0) {
                let mut fan = Vec::new();
                let mut embs = Vec::new();
                let (mut t, mut v, mut w, mut exit) = (t0, v0, w0, first_face);
                loop {
                    let face = self.face_of_slot[t][exit as usize];
                    fan.push(FanFace { face, below: (t, exit), end_vertex: [v, w] });
                    let g = self.gluings[t][exit as usize];
                    let entry = g.perm.apply(exit);
                    let (nt, nv, nw) = (g.tet, g.perm.apply(v), g.perm.apply(w));
                    let ne = edge_number(nv, nw);
                    if self.coorientation[nt][entry as usize] != -1 {
                        return Err(Error::NotTransverse(nt));
                    }
                    // record end labelling
                    if end0_set[nt][ne] {
                        if self.tet_edge_end0[nt][ne] != nv {
                            return Err(Error::Malformed(format!("edge {c} is glued to itself reversed")));
                        }
                    } else {
                        end0_set[nt][ne] = true;
                        self.tet_edge_end0[nt][ne] = nv;
                    }
                    let [fa, fb] = faces_containing(nv, nw);
                    let next_exit = if fa == entry { fb } else { fa };
                    if is_pi(self.taut_angles[nt], ne) {
                        if self.coorientation[nt][next_exit as usize] != -1 {
                            return Err(Error::NotTransverse(nt));
                        }
                        top_tet = Some((nt, ne));
                        break;
                    }
                    if self.coorientation[nt][next_exit as usize] != 1 {
                        return Err(Error::NotTransverse(nt));
                    }
                    embs.push((nt, ne as u8));
                    t = nt;
                    v = nv;
                    w = nw;
                    exit = next_exit;
                }
                fans.push(fan);
                side_embeddings.push(embs);
            }
            end0_set[t0][e0] = true;
            self.tet_edge_end0[t0][e0] = v0;
            let (tt, te) = top_tet.unwrap();
            // cyclic order: bottom tet, fan 0 upward, top tet, fan 1 downward
            let mut embeddings = vec![(t0, e0 as u8)];
            embeddings.extend(side_embeddings[0].iter().copied());
            embeddings.push((tt, te as u8));
            embeddings.extend(side_embeddings[1].iter().rev().copied());
            let fan1 = fans.pop().unwrap();
            let fan0 = fans.pop().unwrap();
            let key = |fan: &Vec<FanFace>| {
                let ends = [fan[0], fan[fan.len() - 1]];
                ends.iter().map(|f| (self.faces[f.face].slots[0], f.face)).min().unwrap()
            };
            let (fan_a, fan_b) = if key(&fan0) <= key(&fan1) { (fan0, fan1) } else { (fan1, fan0) };
            self.edges.push(EdgeClass { embeddings });
            self.fans.push(EdgeFan { edge: c, fan_a, fan_b, below_tet: t0, above_tet: tt });
        }
        for t in 0..n {
            for e in 0..6 {
                if !end0_set[t][e] {
                    return Err(Error::Malformed(format!("tet {t} edge {e} not reached while walking edges")));
                }
            }
        }
        Ok(())
    }

    /// End (0 or 1) of the edge class at vertex `v` of tet-edge `e` of tet `t`.
    pub fn end_at(&self, t: usize, e: usize, v: u8) -> u8 {
        if self.tet_edge_end0[t][e] == v {
            0
        } else {
            1
        }
    }

    pub fn to_doc(&self) -> TriangulationDoc {
        TriangulationDoc {
            name: self.name.clone(),
            tetrahedra: self.num_tetrahedra(),
            gluings: self
                .gluings
                .iter()
                .map(|row| row.clone().map(|g| GluingDoc { tet: g.tet, perm: g.perm.images() }))
                .collect(),
            taut_angles: self.taut_angles.clone(),
        }
    }

    /// Compares two triangulations up to relabelling of tetrahedra and their vertices.
    pub fn is_isomorphic(&self, other: &TautTriangulation) -> bool {
        self.num_tetrahedra() == other.num_tetrahedra() && self.canonical_form() == other.canonical_form()
    }

    /// A labelling-independent form: the lexicographically least relabelled
    /// gluing table over all starting tetrahedra and vertex maps that keep the
    /// orientation and the taut angles.
    pub fn canonical_form(&self) -> Vec<(usize, [u8; 4], u8)> {
        let n = self.num_tetrahedra();
        let mut best: Option<Vec<(usize, [u8; 4], u8)>> = None;
        for t0 in 0..n {
            for p0 in crate::perm::ORDERED_S4 {
                let p0 = Perm4::from_images(p0).unwrap();
                if p0.sign() != 1 {
                    continue;
                }
                // relabel: new tet index and vertex map old -> new
                let mut order: Vec<Option<(usize, Perm4)>> = vec![None; n];
                let mut queue = vec![t0];
                order[t0] = Some((0, p0));
                let mut next = 1;
                let mut head = 0;
                while head < queue.len() {
                    let t = queue[head];
                    head += 1;
                    let (_, pt) = order[t].unwrap();
                    let inv = pt.inverse();
                    for nf in 0..4u8 {
                        let f = inv.apply(nf);
                        let g = self.gluings[t][f as usize];
                        if order[g.tet].is_none() {
                            // map so the glued face lines up with the identity pattern
                            let pu = pt.compose(g.perm.inverse());
                            order[g.tet] = Some((next, pu));
                            next += 1;
                            queue.push(g.tet);
                        }
                    }
                }
                let mut rows = vec![(0usize, [0u8; 4], 0u8); 4 * n];
                let mut angles = vec![0u8; n];
                for t in 0..n {
                    let (nt, pt) = order[t].unwrap();
                    let e0 = EDGE_VERTICES
                        .iter()
                        .position(|&(a, b)| pair_of_edge(edge_number(a, b)) == self.taut_angles[t])
                        .unwrap();
                    let (a, b) = EDGE_VERTICES[e0];
                    angles[nt] = pair_of_edge(edge_number(pt.apply(a), pt.apply(b)));
                    for f in 0..4u8 {
                        let g = self.gluings[t][f as usize];
                        let (nu, pu) = order[g.tet].unwrap();
                        let np = pu.compose(g.perm).compose(pt.inverse());
                        rows[4 * nt + pt.apply(f) as usize] = (nu, np.images(), 0);
                    }
                }
                for t in 0..n {
                    rows[4 * t].2 = angles[t];
                }
                if best.as_ref().map_or(true, |b| rows < *b) {
                    best = Some(rows);
                }
            }
        }
        best.unwrap_or_default()
    }

    /// Angle-sum diagnostics for arbitrary angle digits on this gluing.
    pub fn validate_taut_angles(&self, angles: &[u8]) -> Vec<String> {
        validate_taut_raw(&self.gluings, angles)
    }
}

/// Checks the angle sums of a gluing table under the given digits. An empty
/// list means every edge has exactly two pi-incidences.
pub fn validate_taut_raw(gluings: &[[Gluing; 4]], angles: &[u8]) -> Vec<String> {
    let n = gluings.len();
    let mut uf = UnionFind((0..6 * n).collect());
    for t in 0..n {
        for f in 0..4u8 {
            let g = gluings[t][f as usize];
            for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                if a != f && b != f {
                    uf.union(6 * t + e, 6 * g.tet + edge_number(g.perm.apply(a), g.perm.apply(b)));
                }
            }
        }
    }
    let mut counts: std::collections::BTreeMap<usize, (usize, usize)> = Default::default();
    for t in 0..n {
        for e in 0..6 {
            let entry = counts.entry(uf.find(6 * t + e)).or_default();
            entry.0 += 1;
            if is_pi(angles[t], e) {
                entry.1 += 1;
            }
        }
    }
    counts
        .values()
        .enumerate()
        .filter(|(_, &(_, pis))| pis != 2)
        .map(|(i, &(deg, pis))| format!("edge {i} (degree {deg}) has {pis} pi-angles"))
        .collect()
}

/// Runs the angle-sum check on a document without building the full structure.
pub fn validate_taut(doc: &TriangulationDoc) -> Result<Vec<String>> {
    let mut gluings = Vec::new();
    for row in &doc.gluings {
        let mut out = [Gluing { tet: 0, perm: Perm4::IDENTITY }; 4];
        for (f, g) in row.iter().enumerate() {
            let perm = Perm4::from_images(g.perm).ok_or_else(|| Error::Malformed("bad permutation".into()))?;
            if g.tet >= doc.tetrahedra {
                return Err(Error::Malformed("gluing to missing tetrahedron".into()));
            }
            out[f] = Gluing { tet: g.tet, perm };
        }
        gluings.push(out);
    }
    if doc.taut_angles.len() != gluings.len() {
        return Err(Error::DigitCount { digits: doc.taut_angles.len(), tets: gluings.len() });
    }
    Ok(validate_taut_raw(&gluings, &doc.taut_angles))
}

// ---------------------------------------------------------------------------
// Veering colours

/// Colours every edge so that, in each (oriented) tetrahedron with pi pair k,
/// pair k+1 is blue and pair k+2 is red.
pub fn assign_veering_colors(tri: &TautTriangulation) -> Result<Vec<EdgeColor>> {
    for (e, class) in tri.edges.iter().enumerate() {
        if class.degree() < 4 {
            let (t, _) = class.embeddings[0];
            let _ = e;
            return Err(Error::NotVeering { tet: t });
        }
    }
    let mut colors: Vec<Option<EdgeColor>> = vec![None; tri.num_edges()];
    for t in 0..tri.num_tetrahedra() {
        let k = tri.taut_angles[t];
        for (pair, color) in [((k + 1) % 3, EdgeColor::Blue), ((k + 2) % 3, EdgeColor::Red)] {
            for e in [pair as usize, 5 - pair as usize] {
                let c = tri.tet_edge_class[t][e];
                match colors[c] {
                    None => colors[c] = Some(color),
                    Some(existing) if existing != color => return Err(Error::NotVeering { tet: t }),
                    _ => {}
                }
            }
        }
    }
    colors
        .into_iter()
        .map(|c| c.ok_or_else(|| Error::Malformed("edge with no equatorial incidence".into())))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TetKind {
    Toggle,
    Red,
    Blue,
}

impl VeeringTriangulation {
    pub fn new(taut: TautTriangulation) -> Result<VeeringTriangulation> {
        let edge_colors = assign_veering_colors(&taut)?;
        Ok(VeeringTriangulation { taut, edge_colors })
    }

    /// Swaps red and blue everywhere (the mirror convention).
    pub fn flipped_colors(&self) -> VeeringTriangulation {
        VeeringTriangulation {
            taut: self.taut.clone(),
            edge_colors: self.edge_colors.iter().map(|c| c.flip()).collect(),
        }
    }

    pub fn tet_kind(&self, t: usize) -> TetKind {
        let blue = (0..6)
            .filter(|&e| self.edge_colors[self.tet_edge_class[t][e]] == EdgeColor::Blue)
            .count();
        match blue {
            2 => TetKind::Red,
            4 => TetKind::Blue,
            _ => TetKind::Toggle,
        }
    }

    /// Counts of (toggle, red, blue) tetrahedra.
    pub fn tet_kind_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for t in 0..self.num_tetrahedra() {
            match self.tet_kind(t) {
                TetKind::Toggle => counts[0] += 1,
                TetKind::Red => counts[1] += 1,
                TetKind::Blue => counts[2] += 1,
            }
        }
        counts
    }
}
