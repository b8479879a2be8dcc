//! From a certified curve to a holonomy solution, then follow leaves of the
//! resulting lamination and bracket their slope.

use vh_core::curves::{curve_constraints, extend_to_solution, realize_slope, Budget, Pooling, Realization};
use vh_core::cusp::build_cusp_tracks;
use vh_core::holonomy::{default_seeds, sign_certificate, slope_window, trace_leaf, HolonomySolution, SlopeWindow};
use vh_core::rational::{fmt_q, q, qi};
use vh_core::triangulation::decode_veering;

fn show(w: &SlopeWindow) -> String {
    match w {
        SlopeWindow::Interval { lo, hi } => format!("[{}, {}]", fmt_q(lo), fmt_q(hi)),
        SlopeWindow::Infinity => "inf".into(),
    }
}

fn main() -> anyhow::Result<()> {
    let tri = decode_veering("gLLMQaedfdffjxaxjkn_200211")?;
    let tracks = build_cusp_tracks(&tri)?;
    let Realization::Certified(cert) = realize_slope(&tracks, 0, "-1/3".parse()?, &Budget::default())? else {
        anyhow::bail!("-1/3 should be certified");
    };

    let cs = curve_constraints(&cert.curve, Pooling::Edge);
    let sol = extend_to_solution(&tracks, &cs, &cert.heights)?;
    let leaf = trace_leaf(&tracks, &sol, cert.curve.branches[0], &cert.heights[0], 100)?;
    println!(
        "leaf from branch {}: {:?} after {} steps, displacement {:?}",
        leaf.start_branch,
        leaf.termination,
        leaf.steps.len() + 1,
        leaf.displacement
    );

    let window = slope_window(&tracks, &sol, &default_seeds(&tracks, 0), 2000)?;
    println!("slope window {}", show(&window));
    println!("relative to 0: {:?}", sign_certificate(&[window], &qi(0)));

    let linear = HolonomySolution::linear(&tracks);
    let w = slope_window(&tracks, &linear, &[(cert.curve.branches[0], q(1, 3))], 2000)?;
    println!("all-linear solution: window {}", show(&w));
    Ok(())
}
