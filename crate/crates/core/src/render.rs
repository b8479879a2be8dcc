//! SVG picture of a cusp train track, ladders side by side, degeneracy
//! slope vertical. Vertices are labelled with their edge, branches with their
//! face; an optional weight system is drawn on top.

use std::fmt::Write;

use crate::cusp::{Direction, Tracks};
use crate::curves::WeightSystem;

const W: f64 = 160.0;
const H: f64 = 480.0;
const M: f64 = 40.0;

pub fn render_svg(tracks: &Tracks, cusp: usize, weights: Option<&WeightSystem>) -> String {
    let track = &tracks.cusps[cusp];
    let nl = track.ladders.len();
    // (column, height in [0,1)) of every vertex on this cusp
    let mut place = std::collections::BTreeMap::new();
    for (i, l) in track.ladders.iter().enumerate() {
        let pole = &track.poles[l.left];
        for (k, &v) in pole.vertices.iter().enumerate() {
            place.insert(v, (i, k as f64 / pole.vertices.len() as f64));
        }
    }
    let xy = |col: usize, h: f64| (M + col as f64 * W, M + H - h * H);
    let mut s = String::new();
    let (width, height) = (2.0 * M + nl as f64 * W, 2.0 * M + H);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, l) in track.ladders.iter().enumerate() {
        for (col, pole_id) in [(i, l.left), (i + 1, l.right)] {
            let pole = &track.poles[pole_id];
            let (x, _) = xy(col, 0.0);
            let arrow = if pole.direction == Direction::Up { "up" } else { "down" };
            let _ = writeln!(s, r#"<line x1="{x}" y1="{M}" x2="{x}" y2="{}" stroke="black" stroke-width="2"/>"#, M + H);
            let _ = writeln!(s, r#"<text x="{}" y="{}">{arrow}</text>"#, x - 8.0, M - 10.0);
        }
        for &r in &l.rungs {
            let br = &tracks.branches[r];
            let (a, b) = (place[&br.ends[0].vertex], place[&br.ends[1].vertex]);
            // the end on the left pole sits in column i
            let ((_, ha), (_, hb)) = if track.ladders[i].left == pole_of(tracks, cusp, br.ends[0].vertex) { (a, b) } else { (b, a) };
            let (x1, y1) = xy(i, ha);
            let (x2, y2) = xy(i + 1, hb);
            draw_branch(&mut s, r, br.face, (x1, y1), (x2, y2), weights);
        }
    }
    for (p, pole) in track.poles.iter().enumerate() {
        let cols: Vec<usize> = track
            .ladders
            .iter()
            .enumerate()
            .flat_map(|(i, l)| [(l.left == p).then_some(i), (l.right == p).then_some(i + 1)])
            .flatten()
            .collect();
        for &col in &cols {
            for (k, &v) in pole.vertices.iter().enumerate() {
                let (x, y) = xy(col, k as f64 / pole.vertices.len() as f64);
                let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="3" fill="black"/>"#);
                let _ = writeln!(s, r#"<text x="{}" y="{}" fill="navy">{}</text>"#, x + 4.0, y - 4.0, tracks.switches[v].edge);
                if let Some(&b) = pole.branches.get(k) {
                    let br = &tracks.branches[b];
                    let (_, y2) = xy(col, (k + 1) as f64 / pole.vertices.len() as f64);
                    if weights.is_some_and(|w| w.0[b] > 0) {
                        draw_branch(&mut s, b, br.face, (x, y), (x, y2), weights);
                    }
                }
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn pole_of(tracks: &Tracks, cusp: usize, v: usize) -> usize {
    tracks.cusps[cusp].poles.iter().position(|p| p.vertices.contains(&v)).expect("vertex on a pole")
}

fn draw_branch(s: &mut String, b: usize, face: usize, (x1, y1): (f64, f64), (x2, y2): (f64, f64), weights: Option<&WeightSystem>) {
    let w = weights.map_or(0, |w| w.0[b]);
    let (color, width) = if w > 0 { ("crimson", 2.5) } else { ("gray", 1.0) };
    let _ = writeln!(s, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="{width}"/>"#);
    let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
    let label = if w > 0 { format!("{face}·{w}") } else { face.to_string() };
    let _ = writeln!(s, r#"<text x="{}" y="{}" fill="{color}">{label}</text>"#, mx + 3.0, my - 3.0);
}
