//! Chart slopes to Dehn surgery coefficients for 10_145, with longitude
//! (6, -1) and meridian (-1, 0) in chart coordinates.

use vh_core::cusp::build_cusp_tracks;
use vh_core::curves::Budget;
use vh_core::search::{realizable_interval, surgery_report, SweepBudget};
use vh_core::slope::{convert_slope, PeripheralBasis, SlopeValue};
use vh_core::triangulation::decode_veering;

fn main() -> anyhow::Result<()> {
    let basis = PeripheralBasis::new((6, -1), (-1, 0))?;
    for s in ["-1/3", "-1", "0", "inf", "-4", "4"] {
        let slope: SlopeValue = s.parse()?;
        println!("chart {s:>4} -> coefficient {}", convert_slope(slope, &basis)?);
    }

    let sig = "gLLMQaedfdffjxaxjkn_200211";
    let tracks = build_cusp_tracks(&decode_veering(sig)?)?;
    let budget = SweepBudget {
        denominator_cap: 4,
        curves: Budget { max_length: 12, max_nodes: 20_000, ..Budget::default() },
        anneal: None,
    };
    let report = realizable_interval(sig, &tracks, &budget)?;
    let surgery = surgery_report(&report, 0, &basis)?;
    println!("admissible {}", surgery.admissible.join(" u "));
    println!("obstructed {}", surgery.obstructed.join(" u "));
    println!("unknown    {}", surgery.unknown);
    Ok(())
}
