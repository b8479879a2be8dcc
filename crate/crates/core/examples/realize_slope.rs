//! Certify that a slope is realized on 10_145, replay the certificate, and
//! check that the edge with fans 5|5 can carry the explicit map through
//! (1.5, 1.4), (3.4, 1.6), (3.6, 2.5).
//!
//!     cargo run --release --example realize_slope -- -1/3

use vh_core::curves::{curve_constraints, fit_edge_map, realize_slope, Budget, Pooling, Realization};
use vh_core::cusp::build_cusp_tracks;
use vh_core::holonomy::PLMap;
use vh_core::rational::{fmt_q, q};
use vh_core::slope::SlopeValue;
use vh_core::triangulation::decode_veering;

fn main() -> anyhow::Result<()> {
    let slope: SlopeValue = std::env::args().nth(1).as_deref().unwrap_or("-1/3").parse()?;
    let tri = decode_veering("gLLMQaedfdffjxaxjkn_200211")?;
    let tracks = build_cusp_tracks(&tri)?;

    let cert = match realize_slope(&tracks, 0, slope, &Budget::default())? {
        Realization::Certified(c) => c,
        Realization::Exhausted { stats, .. } => {
            println!("{slope}: nothing found ({} nodes)", stats.nodes);
            return Ok(());
        }
    };
    cert.replay(&tracks)?;
    println!("{slope}: curve {:?} of class {:?}, replay ok", cert.curve.branches, cert.curve.class);
    print!("{}", cert.solution.to_text());

    let edge = tracks.fan_sizes.iter().position(|&f| f == (5, 5)).expect("10_145 has one 5|5 edge");
    let a = PLMap::through(5, 5, &[(q(3, 2), q(7, 5)), (q(17, 5), q(8, 5)), (q(18, 5), q(5, 2))])?;
    let cs = curve_constraints(&cert.curve, Pooling::Edge);
    match fit_edge_map(&cs, edge, &a, 20) {
        Some(t) => {
            let hs: Vec<String> = t.iter().map(fmt_q).collect();
            println!("edge {edge} fits the explicit map with heights {hs:?}");
        }
        None => println!("edge {edge}: no heights found on the 1/20 grid"),
    }
    Ok(())
}
