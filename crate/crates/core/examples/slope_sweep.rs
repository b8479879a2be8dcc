//! Per-cusp report: certified slopes from a Stern–Brocot sweep, obstructed
//! rays, and what remains undecided. Small budgets keep this quick.

use vh_core::cusp::build_cusp_tracks;
use vh_core::curves::Budget;
use vh_core::search::{realizable_interval, SweepBudget};
use vh_core::triangulation::decode_veering;

fn main() -> anyhow::Result<()> {
    let sig = std::env::args().nth(1).unwrap_or_else(|| "gLLMQaedfdffjxaxjkn_200211".into());
    let tracks = build_cusp_tracks(&decode_veering(&sig)?)?;
    let budget = SweepBudget {
        denominator_cap: 6,
        curves: Budget { max_length: 16, max_nodes: 20_000, ..Budget::default() },
        anneal: None,
    };
    let report = realizable_interval(&sig, &tracks, &budget)?;
    for c in &report.cusps {
        let slopes: Vec<String> = c.realizable_slopes().iter().map(ToString::to_string).collect();
        println!("cusp {}: realizable {{{}}}", c.cusp, slopes.join(", "));
        println!("  obstructed {}", c.obstruction.describe());
        println!("  unknown {}", c.unknown);
        println!("  {} swept slopes ran out of budget", c.exhausted.len());
    }
    Ok(())
}
