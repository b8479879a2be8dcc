//! Randomized search for a solution whose slopes all lie on one side of 0.
//! A failure is evidence only. The schedule is shortened here; `vh anneal`
//! runs the full default one.

use vh_core::cusp::build_cusp_tracks;
use vh_core::holonomy::SlopeWindow;
use vh_core::rational::{fmt_q, qi};
use vh_core::search::{anneal, AnnealOutcome, AnnealParams, Target};
use vh_core::triangulation::decode_veering;

fn main() -> anyhow::Result<()> {
    let tracks = build_cusp_tracks(&decode_veering("gLLMQaedfdffjxaxjkn_200211")?)?;
    let params = AnnealParams { proposals: 5_000, restarts: 2, ..AnnealParams::default() };
    for target in [Target::Below, Target::Above] {
        match anneal(&tracks, &qi(0), target, &params) {
            AnnealOutcome::Success { sign, windows, restart, .. } => {
                let ws: Vec<String> = windows
                    .iter()
                    .map(|w| match w {
                        SlopeWindow::Interval { lo, hi } => format!("[{}, {}]", fmt_q(lo), fmt_q(hi)),
                        SlopeWindow::Infinity => "inf".into(),
                    })
                    .collect();
                println!("{target:?} 0: certified {sign:?} on restart {restart}, windows {}", ws.join(" "));
            }
            AnnealOutcome::Failure { best_energy, .. } => {
                println!("{target:?} 0: no solution found (best energy {best_energy:.4})");
            }
        }
    }
    Ok(())
}
