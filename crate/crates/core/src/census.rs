//! Census files: one taut signature per line (extra columns ignored),
//! optionally gzipped; batch scans over them.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use rayon::prelude::*;
use serde::Serialize;

use crate::cusp::{build_cusp_tracks, check_track_invariants};
use crate::error::{Error, Result};
use crate::search::{is_two_ladder, realizable_interval, SweepBudget};
use crate::triangulation::{decode_veering, VeeringTriangulation};

pub struct CensusEntry {
    pub line: usize,
    pub signature: String,
    pub triangulation: VeeringTriangulation,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusLineError {
    pub line: usize,
    pub text: String,
    pub error: String,
}

fn open(path: &Path) -> Result<Box<dyn BufRead + Send>> {
    let file = File::open(path).map_err(|e| Error::Census(format!("{}: {e}", path.display())))?;
    let reader: Box<dyn Read + Send> =
        if path.extension().is_some_and(|x| x == "gz") { Box::new(GzDecoder::new(file)) } else { Box::new(file) };
    Ok(Box::new(BufReader::new(reader)))
}

/// Signature lines with their 1-based line numbers; blank and `#` lines skipped.
fn signature_lines(reader: impl BufRead) -> impl Iterator<Item = Result<(usize, String)>> {
    reader.lines().enumerate().filter_map(|(i, l)| match l {
        Err(e) => Some(Err(Error::Census(format!("line {}: {e}", i + 1)))),
        Ok(l) => {
            let sig = l.split_whitespace().next()?.to_string();
            (!sig.starts_with('#')).then_some(Ok((i + 1, sig)))
        }
    })
}

/// Lazily decodes a census file. Lines that fail to decode are skipped and
/// collected in `errors`.
pub struct CensusReader {
    lines: Box<dyn Iterator<Item = Result<(usize, String)>> + Send>,
    pub errors: Vec<CensusLineError>,
}

impl Iterator for CensusReader {
    type Item = Result<CensusEntry>;

    fn next(&mut self) -> Option<Result<CensusEntry>> {
        loop {
            let (line, signature) = match self.lines.next()? {
                Ok(x) => x,
                Err(e) => return Some(Err(e)),
            };
            match decode_veering(&signature) {
                Ok(triangulation) => return Some(Ok(CensusEntry { line, signature, triangulation })),
                Err(e) => self.errors.push(CensusLineError { line, text: signature, error: e.to_string() }),
            }
        }
    }
}

pub fn load_census(path: impl AsRef<Path>) -> Result<CensusReader> {
    Ok(CensusReader { lines: Box::new(signature_lines(open(path.as_ref())?)), errors: Vec::new() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Filter {
    /// Single cusp with exactly one upward and one downward ladder.
    TwoLaddersSingleCusp,
    LadderHistogram,
    RealizableSweep,
}

impl std::str::FromStr for Filter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Filter> {
        match s {
            "two-ladders-single-cusp" => Ok(Filter::TwoLaddersSingleCusp),
            "ladder-histogram" => Ok(Filter::LadderHistogram),
            "realizable-sweep" => Ok(Filter::RealizableSweep),
            _ => Err(Error::Malformed(format!(
                "unknown filter {s:?}; expected two-ladders-single-cusp, ladder-histogram or realizable-sweep"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub line: usize,
    pub signature: String,
    pub tetrahedra: usize,
    pub cusps: usize,
    /// Ladder count per cusp.
    pub ladders: Vec<usize>,
    pub matched: bool,
    pub summary: String,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub total: usize,
    pub failed: usize,
    pub single_cusp: usize,
    pub matched: usize,
    /// Ladder counts over single-cusp entries.
    pub single_cusp_histogram: BTreeMap<usize, usize>,
    /// Ladder counts over all cusps of all entries.
    pub cusp_histogram: BTreeMap<usize, usize>,
    /// Rows failing a cusp track invariant.
    pub invariant_violations: usize,
}

impl ScanSummary {
    fn add(&mut self, row: &ScanRow) {
        self.total += 1;
        if row.error.is_some() {
            self.failed += 1;
            return;
        }
        if row.cusps == 1 {
            self.single_cusp += 1;
            *self.single_cusp_histogram.entry(row.ladders[0]).or_default() += 1;
        }
        for &l in &row.ladders {
            *self.cusp_histogram.entry(l).or_default() += 1;
        }
        if row.matched {
            self.matched += 1;
        }
    }
}

fn scan_one(line: usize, signature: &str, filter: &Filter, budget: &SweepBudget) -> (ScanRow, bool) {
    let mut row = ScanRow {
        line,
        signature: signature.to_string(),
        tetrahedra: 0,
        cusps: 0,
        ladders: Vec::new(),
        matched: false,
        summary: String::new(),
        error: None,
    };
    let tri = match decode_veering(signature) {
        Ok(t) => t,
        Err(e) => {
            row.error = Some(e.to_string());
            return (row, false);
        }
    };
    row.tetrahedra = tri.num_tetrahedra();
    let tracks = match build_cusp_tracks(&tri) {
        Ok(t) => t,
        Err(e) => {
            row.error = Some(e.to_string());
            return (row, false);
        }
    };
    row.cusps = tracks.cusps.len();
    row.ladders = tracks.cusps.iter().map(|c| c.ladders.len()).collect();
    let violation = !check_track_invariants(&tri, &tracks).is_empty();
    match filter {
        Filter::TwoLaddersSingleCusp | Filter::LadderHistogram => {
            row.matched = row.cusps == 1 && is_two_ladder(&tracks, 0);
        }
        Filter::RealizableSweep => {
            row.matched = row.cusps == 1 && is_two_ladder(&tracks, 0);
            match realizable_interval(signature, &tracks, budget) {
                Ok(report) => {
                    let parts: Vec<String> = report
                        .cusps
                        .iter()
                        .map(|c| {
                            let slopes: Vec<String> = c.realizable_slopes().iter().map(ToString::to_string).collect();
                            format!("realizable {{{}}} obstructed {}", slopes.join(" "), c.obstruction.describe())
                        })
                        .collect();
                    row.summary = parts.join("; ");
                }
                Err(e) => row.error = Some(e.to_string()),
            }
        }
    }
    (row, violation)
}

pub struct ScanResult {
    pub summary: ScanSummary,
    pub rows: Vec<ScanRow>,
    pub unreadable: Vec<CensusLineError>,
}

/// Scans every entry with `jobs` worker threads (0: rayon's default). Rows
/// come back in file order and the summary does not depend on `jobs`.
pub fn scan_census(path: impl AsRef<Path>, filter: &Filter, jobs: usize, budget: &SweepBudget) -> Result<ScanResult> {
    let lines: Vec<(usize, String)> = signature_lines(open(path.as_ref())?).collect::<Result<_>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Census(e.to_string()))?;
    let scanned: Vec<(ScanRow, bool)> =
        pool.install(|| lines.par_iter().map(|(l, s)| scan_one(*l, s, filter, budget)).collect());
    let mut summary = ScanSummary::default();
    let mut rows = Vec::with_capacity(scanned.len());
    let mut unreadable = Vec::new();
    for (row, violation) in scanned {
        summary.add(&row);
        if violation {
            summary.invariant_violations += 1;
        }
        if let Some(e) = &row.error {
            unreadable.push(CensusLineError { line: row.line, text: row.signature.clone(), error: e.clone() });
        }
        rows.push(row);
    }
    Ok(ScanResult { summary, rows, unreadable })
}

pub fn write_rows_csv(rows: &[ScanRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["line", "signature", "tetrahedra", "cusps", "ladders", "matched", "summary", "error"])
        .map_err(|e| Error::Census(e.to_string()))?;
    for r in rows {
        let ladders: Vec<String> = r.ladders.iter().map(ToString::to_string).collect();
        w.write_record([
            r.line.to_string(),
            r.signature.clone(),
            r.tetrahedra.to_string(),
            r.cusps.to_string(),
            ladders.join(";"),
            r.matched.to_string(),
            r.summary.clone(),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(|e| Error::Census(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Census(e.to_string()))?;
    Ok(())
}
