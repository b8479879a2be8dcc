mod support;

use std::io::Write;

use flate2::write::GzEncoder;
use vh_core::census::{load_census, scan_census, write_rows_csv, Filter};
use vh_core::curves::Budget;
use vh_core::cusp::build_cusp_tracks;
use vh_core::search::{realizable_interval, SweepBudget};
use vh_core::triangulation::decode_veering;

use support::{fixture_path, K10_145};

fn temp(name: &str, contents: &[u8]) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("vh-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn comments_skipped_and_bad_lines_collected() {
    let text = "# header\ncPcbbbdxm_10\n\ncPcbbbiht_12 extra columns\ncPcbbbiht_1234\ndLQacccjsnk_200\n";
    let path = temp("small.txt", text.as_bytes());
    let mut reader = load_census(&path).unwrap();
    let sigs: Vec<String> = reader.by_ref().map(|e| e.unwrap().signature).collect();
    assert_eq!(sigs, ["cPcbbbdxm_10", "cPcbbbiht_12", "dLQacccjsnk_200"]);
    assert_eq!(reader.errors.len(), 1);
    assert_eq!(reader.errors[0].line, 5);

    let mut gz = GzEncoder::new(Vec::new(), flate2::Compression::default());
    gz.write_all(text.as_bytes()).unwrap();
    let gz_path = temp("small.txt.gz", &gz.finish().unwrap());
    assert_eq!(load_census(&gz_path).unwrap().filter_map(Result::ok).count(), 3);
    assert!(load_census("/nonexistent/census.txt").is_err());
}

#[test]
fn scan_does_not_depend_on_parallelism() {
    let budget = SweepBudget::default();
    let one = scan_census(fixture_path(), &Filter::LadderHistogram, 1, &budget).unwrap();
    let three = scan_census(fixture_path(), &Filter::LadderHistogram, 3, &budget).unwrap();
    assert_eq!(one.summary, three.summary);
    assert_eq!(one.rows, three.rows);
    let s = &one.summary;
    assert_eq!((s.total, s.failed, s.invariant_violations), (200, 0, 0));
    assert!(one.rows.iter().all(|r| r.ladders.iter().all(|&l| l >= 2 && l % 2 == 0)));
    assert_eq!(s.single_cusp_histogram.values().sum::<usize>(), s.single_cusp);

    let mut csv = Vec::new();
    write_rows_csv(&one.rows, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 201);
    assert!(text.starts_with("line,signature,tetrahedra,cusps,ladders,matched,summary,error"));
}

#[test]
fn sweep_row_matches_direct_report() {
    let budget = SweepBudget {
        denominator_cap: 3,
        curves: Budget { max_length: 12, max_nodes: 20_000, ..Budget::default() },
        anneal: None,
    };
    let path = temp("one.txt", format!("{K10_145}\n").as_bytes());
    let scan = scan_census(&path, &Filter::RealizableSweep, 1, &budget).unwrap();
    let row = &scan.rows[0];
    assert!(row.matched);

    let tracks = build_cusp_tracks(&decode_veering(K10_145).unwrap()).unwrap();
    let report = realizable_interval(K10_145, &tracks, &budget).unwrap();
    let c = &report.cusps[0];
    let slopes: Vec<String> = c.realizable_slopes().iter().map(ToString::to_string).collect();
    assert_eq!(row.summary, format!("realizable {{{}}} obstructed {}", slopes.join(" "), c.obstruction.describe()));
}
