//! Boundary train tracks: ladderpoles, ladders, the chart, and an SVG picture.
//!
//!     cargo run --example cusp_ladders -- gLLMQaedfdffjxaxjkn_200211 cusp.svg

use vh_core::cusp::{build_cusp_tracks, check_track_invariants};
use vh_core::homology::homological_longitude;
use vh_core::render::render_svg;
use vh_core::triangulation::decode_veering;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let sig = args.next().unwrap_or_else(|| "gLLMQaedfdffjxaxjkn_200211".into());
    let svg = args.next();

    let tri = decode_veering(&sig)?;
    let tracks = build_cusp_tracks(&tri)?;
    for c in &tracks.cusps {
        println!("cusp {}: {} ladders", c.cusp, c.ladders.len());
        for p in &c.poles {
            println!("  {:?} pole through {} vertices", p.direction, p.vertices.len());
        }
        for (i, l) in c.ladders.iter().enumerate() {
            println!("  ladder {i}: {} triangles, poles {} | {}", l.triangles.len(), l.left, l.right);
        }
        // the longitude is computed from homology, independently of the chart
        println!("  homological longitude {:?}", homological_longitude(&tri, &tracks, c.cusp)?);
    }
    let bad = check_track_invariants(&tri, &tracks);
    println!("invariants: {}", if bad.is_empty() { "ok".into() } else { bad.join("; ") });

    if let Some(path) = svg {
        std::fs::write(&path, render_svg(&tracks, 0, None))?;
        println!("wrote {path}");
    }
    Ok(())
}
