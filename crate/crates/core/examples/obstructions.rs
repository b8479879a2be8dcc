//! The two combinatorial obstructions: the bound for two-ladder cusps and the
//! descent bound from ladderpole runs.
//!
//!     cargo run --release --example obstructions -- cPcbbbiht_12

use vh_core::search::{descent_bound, is_two_ladder, milnor_wood_bound};
use vh_core::cusp::build_cusp_tracks;
use vh_core::rational::fmt_q;
use vh_core::triangulation::decode_veering;

fn main() -> anyhow::Result<()> {
    let sig = std::env::args().nth(1).unwrap_or_else(|| "gLLMQaedfdffjxaxjkn_200211".into());
    let tracks = build_cusp_tracks(&decode_veering(&sig)?)?;
    for c in 0..tracks.cusps.len() {
        println!("cusp {c}: two-ladder {}", is_two_ladder(&tracks, c));
        let mw = milnor_wood_bound(&tracks, c);
        println!("  ladder bound: {} {:?}", mw.describe(), mw.notes);
        let d = descent_bound(&tracks, c);
        let show = |x: &Option<_>| x.as_ref().map_or("unbounded".to_string(), fmt_q);
        println!(
            "  descent: {} run arcs (cap {}), slopes within [{}, {}]",
            d.arcs.len(),
            d.run_cap,
            show(&d.min_slope),
            show(&d.max_slope)
        );
        println!("  combined: {}", mw.union(d.obstruction).describe());
    }
    Ok(())
}
