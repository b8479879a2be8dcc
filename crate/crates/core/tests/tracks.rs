mod support;

use vh_core::cusp::{build_cusp_tracks, check_track_invariants, Direction};
use vh_core::homology::homological_longitude;
use vh_core::triangulation::{decode_veering, parse_triangulation};

use support::{fixture_rows, FIG8, K10_145};

#[test]
fn k10_145_has_one_up_and_one_down_ladder() {
    let tri = decode_veering(K10_145).unwrap();
    let tracks = build_cusp_tracks(&tri).unwrap();
    assert_eq!(tracks.cusps.len(), 1);
    let c = &tracks.cusps[0];
    assert_eq!(c.ladders.len(), 2);
    let mut dirs: Vec<Direction> = c.poles.iter().map(|p| p.direction).collect();
    dirs.sort_by_key(|d| *d == Direction::Down);
    assert_eq!(dirs, [Direction::Up, Direction::Down]);
    assert!(check_track_invariants(&tri, &tracks).is_empty());
}

#[test]
fn k10_145_longitude_in_chart() {
    let tri = decode_veering(K10_145).unwrap();
    let tracks = build_cusp_tracks(&tri).unwrap();
    assert_eq!(homological_longitude(&tri, &tracks, 0).unwrap(), (6, -1));
}

#[test]
fn figure_eight_tracks() {
    let tri = decode_veering(FIG8).unwrap();
    let tracks = build_cusp_tracks(&tri).unwrap();
    assert_eq!(tracks.cusps[0].ladders.len(), 4);
    assert_eq!(tracks.cusps[0].vertices.len(), 2 * tri.num_edges());
    assert!(check_track_invariants(&tri, &tracks).is_empty());
}

/// Ladder counts and tetrahedron kinds against the census data columns.
#[test]
fn fixture_matches_census_columns() {
    let rows = fixture_rows();
    assert_eq!(rows.len(), 200);
    for (sig, ladders, kinds) in rows {
        let tri = decode_veering(&sig).unwrap();
        let tracks = build_cusp_tracks(&tri).unwrap();
        let bad = check_track_invariants(&tri, &tracks);
        assert!(bad.is_empty(), "{sig}: {bad:?}");
        let mut got: Vec<usize> = tracks.cusps.iter().map(|c| c.ladders.len()).collect();
        let mut want = ladders.clone();
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want, "{sig}: ladder counts");
        assert_eq!(tri.tet_kind_counts().to_vec(), kinds, "{sig}: tetrahedron kinds");
    }
}

#[test]
fn documents_round_trip() {
    for (sig, _, _) in fixture_rows().into_iter().step_by(7) {
        let tri = decode_veering(&sig).unwrap();
        let text = tri.to_doc().to_text();
        let back = parse_triangulation(&text).unwrap();
        assert!(back.is_isomorphic(&tri), "{sig}");
        assert_eq!(back.to_doc().to_text(), text, "{sig}: canonical text changed");
    }
}

#[test]
fn bad_signatures_are_rejected() {
    for sig in ["", "cPcbbbiht", "cPcbbbiht_1", "cPcbbbiht_123", "cPcbbbiht_19", "c!cbbbiht_12"] {
        assert!(decode_veering(sig).is_err(), "{sig:?} decoded");
    }
}
