//! Decode a taut signature, print the native document and check it survives
//! a round trip through text.
//!
//!     cargo run --example decode_signature -- cPcbbbiht_12

use vh_core::triangulation::{decode_veering, parse_triangulation};

fn main() -> anyhow::Result<()> {
    let sig = std::env::args().nth(1).unwrap_or_else(|| "gLLMQaedfdffjxaxjkn_200211".into());
    let tri = decode_veering(&sig)?;
    let [toggle, red, blue] = tri.tet_kind_counts();
    println!(
        "{sig}: {} tetrahedra, {} edges; {toggle} toggle, {red} red, {blue} blue",
        tri.num_tetrahedra(),
        tri.num_edges()
    );
    for (e, c) in tri.edge_colors.iter().enumerate() {
        println!("  edge {e}: {c:?}");
    }

    let text = tri.to_doc().to_text();
    let again = parse_triangulation(&text)?;
    assert!(again.is_isomorphic(&tri), "document round trip changed the triangulation");
    println!("{text}");
    Ok(())
}
