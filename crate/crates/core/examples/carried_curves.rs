//! Weight systems on a cusp track: enumerate the carried curves of a class,
//! check switch conditions, and split each system into closed curves.

use vh_core::curves::{enumerate_weight_systems, weights_to_multicurve, Budget};
use vh_core::cusp::build_cusp_tracks;
use vh_core::triangulation::decode_veering;

fn main() -> anyhow::Result<()> {
    let tri = decode_veering("gLLMQaedfdffjxaxjkn_200211")?;
    let tracks = build_cusp_tracks(&tri)?;
    let budget = Budget { max_weight: 8, max_length: 8, ..Budget::default() };

    for class in [(1, 0), (3, -1), (1, -1)] {
        let systems = enumerate_weight_systems(&tracks, 0, class, &budget);
        println!("class {class:?}: {} weight systems of weight <= {}", systems.len(), budget.max_weight);
        for ws in systems.iter().take(3) {
            assert!(ws.satisfies_switches(&tracks));
            assert_eq!(ws.class(&tracks), class);
            let curves = weights_to_multicurve(&tracks, ws)?;
            let walks: Vec<_> = curves.iter().map(|c| c.branches.clone()).collect();
            println!("  weight {} -> {walks:?}", ws.total());
        }
    }
    Ok(())
}
