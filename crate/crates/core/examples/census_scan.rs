//! Scan a census file (the vendored 200-entry fixture by default) and print
//! ladder statistics.
//!
//!     VH_CENSUS_PATH=crates/core/data/veering_census.txt.gz cargo run --release --example census_scan

use vh_core::census::{load_census, scan_census, Filter};
use vh_core::search::SweepBudget;

fn main() -> anyhow::Result<()> {
    let path = std::env::var("VH_CENSUS_PATH")
        .unwrap_or_else(|_| concat!(env!("CARGO_MANIFEST_DIR"), "/data/census_fixture.txt").into());

    let mut reader = load_census(&path)?;
    let first = reader.next().transpose()?.expect("empty census");
    println!("first entry: line {} {}", first.line, first.signature);

    let result = scan_census(&path, &Filter::LadderHistogram, 0, &SweepBudget::default())?;
    let s = &result.summary;
    println!("{} entries, {} failed, {} single-cusp", s.total, s.failed, s.single_cusp);
    println!("single cusp with two ladders: {}", s.matched);
    println!("ladders per single-cusp entry: {:?}", s.single_cusp_histogram);
    println!("invariant violations: {}", s.invariant_violations);
    Ok(())
}
