use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use vh_core::census::{scan_census, write_rows_csv, Filter};
use vh_core::constraints::{ConstraintSet, Pair};
use vh_core::curves::{realize_slope, Budget, Realization, RealizationCertificate};
use vh_core::cusp::{build_cusp_tracks, check_track_invariants, CuspTrack, Tracks};
use vh_core::holonomy::SlopeWindow;
use vh_core::homology::homological_longitude;
use vh_core::rational::{fmt_q, parse_q};
use vh_core::render::render_svg;
use vh_core::search::{
    anneal, realizable_interval, surgery_report, AnnealOutcome, AnnealParams, SolverReport, SweepBudget, Target,
};
use vh_core::slope::{PeripheralBasis, SlopeValue};
use vh_core::triangulation::{decode_veering, parse_triangulation, VeeringTriangulation};
use vh_core::Error;

const INPUT_INVALID: u8 = 2;
const INVARIANT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "vh", version, about = "Holonomy solver for veering triangulations")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLike,
}

#[derive(Subcommand)]
enum Cmd {
    /// Read a native triangulation document and print it canonically.
    Parse { file: PathBuf },
    /// Decode a taut signature into a native document.
    Decode { signature: String },
    /// Boundary train tracks, ladders and chart data.
    Cusp {
        input: String,
        /// Also draw this cusp as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        cusp: usize,
    },
    /// Search for a certificate that a slope is realized.
    Realize {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        slope: SlopeValue,
        #[arg(long, default_value_t = 0)]
        cusp: usize,
        #[command(flatten)]
        budget: CurveBudget,
    },
    /// Realizable, obstructed and undecided slopes of every cusp.
    Interval {
        input: String,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Randomized search for a solution on one side of a slope.
    Anneal {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        proposals: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Convert the interval report into Dehn surgery coefficients.
    Surgery {
        input: String,
        /// λh,λv,μh,μv in chart coordinates.
        #[arg(long, allow_hyphen_values = true)]
        basis: String,
        #[arg(long)]
        flip_orientation: bool,
        #[arg(long, default_value_t = 0)]
        cusp: usize,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Batch scan of a census file.
    Census {
        #[arg(env = "VH_CENSUS_PATH")]
        file: PathBuf,
        #[arg(long, default_value = "two-ladders-single-cusp")]
        filter: Filter,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Per-entry rows as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Above,
    Below,
}

#[derive(Args)]
struct CurveBudget {
    #[arg(long, default_value_t = Budget::default().max_weight)]
    max_weight: u32,
    #[arg(long, default_value_t = Budget::default().max_multiple)]
    max_multiple: u32,
    #[arg(long, default_value_t = Budget::default().max_length)]
    max_length: usize,
    #[arg(long, default_value_t = Budget::default().max_nodes)]
    max_nodes: u64,
}

impl CurveBudget {
    fn budget(&self) -> Budget {
        Budget {
            max_weight: self.max_weight,
            max_multiple: self.max_multiple,
            max_length: self.max_length,
            max_nodes: self.max_nodes,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = SweepBudget::default().denominator_cap)]
    denominator_cap: i64,
    /// Longest curve tried per slope.
    #[arg(long, default_value_t = SweepBudget::default().curves.max_length)]
    sweep_length: usize,
    /// Search nodes per slope.
    #[arg(long, default_value_t = SweepBudget::default().curves.max_nodes)]
    sweep_nodes: u64,
    /// Also anneal on both sides of slope 0 (seed 1, default schedule).
    #[arg(long)]
    anneal: bool,
}

impl SweepArgs {
    fn budget(&self) -> SweepBudget {
        let d = SweepBudget::default();
        SweepBudget {
            denominator_cap: self.denominator_cap,
            curves: Budget { max_length: self.sweep_length, max_nodes: self.sweep_nodes, ..d.curves },
            anneal: self.anneal.then(AnnealParams::default),
        }
    }
}

/// A loaded input: a signature, a census-style line file, or a native document.
struct Input {
    name: String,
    tri: VeeringTriangulation,
    tracks: Tracks,
}

fn load(input: &str) -> anyhow::Result<Input> {
    let path = Path::new(input);
    let (name, tri) = if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {input}"))?;
        if text.trim_start().starts_with('{') {
            let taut = parse_triangulation(&text)?;
            let name = if taut.name.is_empty() { input.to_string() } else { taut.name.clone() };
            (name, VeeringTriangulation::new(taut)?)
        } else {
            let Some(sig) = text.split_whitespace().find(|t| !t.starts_with('#')) else {
                bail!(Error::Malformed(format!("{input}: no signature")));
            };
            (sig.to_string(), decode_veering(sig)?)
        }
    } else {
        (input.to_string(), decode_veering(input)?)
    };
    let tracks = build_cusp_tracks(&tri)?;
    Ok(Input { name, tri, tracks })
}

fn check_cusp(inp: &Input, cusp: usize) -> anyhow::Result<()> {
    if cusp >= inp.tracks.cusps.len() {
        bail!(Error::Malformed(format!("{} has {} cusp(s); no cusp {cusp}", inp.name, inp.tracks.cusps.len())));
    }
    Ok(())
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
    let out = match format {
        Format::JsonLike => serde_json::to_string_pretty(value)? + "\n",
        Format::Text => text(),
    };
    write_stdout(&out)
}

/// A closed pipe (`vh ... | head`) is not an error worth a panic.
fn write_stdout(s: &str) -> anyhow::Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(s.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn pairs_text(cs: &ConstraintSet) -> String {
    let mut s = String::new();
    for (key, pairs) in &cs.groups {
        let ps: Vec<String> = pairs.iter().map(|Pair { a, b }| format!("{a} -> {b}")).collect();
        let _ = writeln!(s, "  edge {key}: {}", ps.join(", "));
    }
    s
}

fn certificate_text(c: &RealizationCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "slope {}: CERTIFIED", c.slope);
    let _ = writeln!(s, "curve: {:?} class {:?}", c.curve.branches, c.curve.class);
    let _ = writeln!(s, "constraints:");
    s += &pairs_text(&c.constraints);
    let hs: Vec<String> = c.heights.iter().enumerate().map(|(i, h)| format!("t{i}={}", fmt_q(h))).collect();
    let _ = writeln!(s, "heights: {}", hs.join(" "));
    let _ = writeln!(s, "solution:");
    for line in c.solution.to_text().lines() {
        let _ = writeln!(s, "  {line}");
    }
    s
}

fn window_text(w: &SlopeWindow) -> String {
    match w {
        SlopeWindow::Interval { lo, hi } => format!("[{}, {}]", fmt_q(lo), fmt_q(hi)),
        SlopeWindow::Infinity => "inf".into(),
    }
}

fn report_text(r: &SolverReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "signature {}", r.signature);
    let _ = writeln!(s, "degeneracy slope {}", r.degeneracy);
    for c in &r.cusps {
        let kind = if c.two_ladder { ", two-ladder" } else { "" };
        let _ = writeln!(s, "cusp {}: {} ladders{kind}", c.cusp, c.ladders);
        let slopes: Vec<String> = c.realizable_slopes().iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "  realizable: {{{}}}", slopes.join(", "));
        let _ = writeln!(s, "  obstructed: {}", c.obstruction.describe());
        for n in &c.obstruction.notes {
            let _ = writeln!(s, "    note: {n}");
        }
        let d = &c.descent;
        let show = |x: &Option<_>| x.as_ref().map_or("unbounded".to_string(), fmt_q);
        let _ = writeln!(
            s,
            "  descent: slopes within [{}, {}] ({} arcs, run cap {})",
            show(&d.min_slope),
            show(&d.max_slope),
            d.arcs,
            d.run_cap
        );
        let ex: Vec<String> = c.exhausted.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "  exhausted: {} slopes {{{}}}", ex.len(), ex.join(", "));
        let _ = writeln!(s, "  unknown: {}", c.unknown);
        for a in &c.anneal {
            let ws: Vec<String> = a.windows.iter().map(window_text).collect();
            let verdict = if a.certified { format!("certified, windows {}", ws.join(" ")) } else { "FAILURE".into() };
            let _ = writeln!(s, "  anneal {:?} {}: {verdict}", a.target, fmt_q(&a.reference));
        }
    }
    s
}

#[derive(Serialize)]
struct CuspDoc<'a> {
    name: &'a str,
    tetrahedra: usize,
    edges: usize,
    fan_sizes: &'a [(usize, usize)],
    cusps: &'a [CuspTrack],
    longitudes: Vec<Option<(i64, i64)>>,
    invariant_violations: Vec<String>,
}

fn cusp_text(d: &CuspDoc) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: {} tetrahedra, {} edges, {} cusp(s)", d.name, d.tetrahedra, d.edges, d.cusps.len());
    let fans: Vec<String> = d.fan_sizes.iter().enumerate().map(|(e, (n, m))| format!("{e}:{n}|{m}")).collect();
    let _ = writeln!(s, "fans {}", fans.join(" "));
    for (c, lon) in d.cusps.iter().zip(&d.longitudes) {
        let _ = writeln!(
            s,
            "cusp {}: {} vertices, {} branches, {} triangles",
            c.cusp,
            c.vertices.len(),
            c.branches.len(),
            c.triangles.len()
        );
        for (i, p) in c.poles.iter().enumerate() {
            let _ = writeln!(s, "  pole {i} {:?}: vertices {:?}", p.direction, p.vertices);
        }
        for (i, l) in c.ladders.iter().enumerate() {
            let _ = writeln!(s, "  ladder {i} (poles {}|{}): rungs {:?}", l.left, l.right, l.rungs);
        }
        let _ = writeln!(s, "  drift {:?}", c.chart.drift);
        if let Some(l) = lon {
            let _ = writeln!(s, "  homological longitude {l:?}");
        }
    }
    if d.invariant_violations.is_empty() {
        let _ = writeln!(s, "invariants: ok");
    }
    for v in &d.invariant_violations {
        let _ = writeln!(s, "invariant violated: {v}");
    }
    s
}

fn parse_basis(text: &str, flip: bool) -> anyhow::Result<PeripheralBasis> {
    let xs: Vec<i64> = text
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Malformed(format!("basis {text:?}: expected four integers")))?;
    let [lh, lv, mh, mv] = xs[..] else {
        bail!(Error::Malformed(format!("basis {text:?}: expected four integers")));
    };
    let mut b = PeripheralBasis::new((lh, lv), (mh, mv))?;
    b.flip_orientation = flip;
    Ok(b)
}

/// Ok(true) when the command detected an internal inconsistency.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let fmt = cli.format;
    match cli.cmd {
        Cmd::Parse { file } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            write_stdout(&(parse_triangulation(&text)?.to_doc().to_text() + "\n"))?;
        }
        Cmd::Decode { signature } => {
            write_stdout(&(decode_veering(&signature)?.to_doc().to_text() + "\n"))?;
        }
        Cmd::Cusp { input, svg, cusp } => {
            let inp = load(&input)?;
            check_cusp(&inp, cusp)?;
            let doc = CuspDoc {
                name: &inp.name,
                tetrahedra: inp.tri.num_tetrahedra(),
                edges: inp.tri.num_edges(),
                fan_sizes: &inp.tracks.fan_sizes,
                cusps: &inp.tracks.cusps,
                longitudes: (0..inp.tracks.cusps.len())
                    .map(|c| homological_longitude(&inp.tri, &inp.tracks, c).ok())
                    .collect(),
                invariant_violations: check_track_invariants(&inp.tri, &inp.tracks),
            };
            emit(fmt, &doc, || cusp_text(&doc))?;
            if let Some(path) = svg {
                std::fs::write(&path, render_svg(&inp.tracks, cusp, None))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            return Ok(!doc.invariant_violations.is_empty());
        }
        Cmd::Realize { input, slope, cusp, budget } => {
            let inp = load(&input)?;
            check_cusp(&inp, cusp)?;
            let result = realize_slope(&inp.tracks, cusp, slope, &budget.budget())?;
            emit(fmt, &result, || match &result {
                Realization::Certified(c) => certificate_text(c) + "replay: ok\n",
                Realization::Exhausted { stats, seconds, .. } => format!(
                    "slope {slope}: EXHAUSTED ({} nodes, curves up to length {}, {seconds:.1}s); not evidence of non-realizability\n",
                    stats.nodes, stats.max_length_reached
                ),
            })?;
        }
        Cmd::Interval { input, sweep } => {
            let inp = load(&input)?;
            let report = realizable_interval(&inp.name, &inp.tracks, &sweep.budget())?;
            emit(fmt, &report, || report_text(&report))?;
        }
        Cmd::Anneal { input, target, side, seed, proposals, restarts } => {
            let inp = load(&input)?;
            let s = parse_q(&target)?;
            let d = AnnealParams::default();
            let params = AnnealParams {
                seed,
                proposals: proposals.unwrap_or(d.proposals),
                restarts: restarts.unwrap_or(d.restarts),
                ..d
            };
            let target = match side {
                SideArg::Above => Target::Above,
                SideArg::Below => Target::Below,
            };
            let started = Instant::now();
            let outcome = anneal(&inp.tracks, &s, target, &params);
            eprintln!("anneal finished in {:.1}s", started.elapsed().as_secs_f64());
            emit(fmt, &outcome, || match &outcome {
                AnnealOutcome::Success { solution, sign, windows, restart, proposals } => {
                    let ws: Vec<String> = windows.iter().map(window_text).collect();
                    let mut t = format!(
                        "SUCCESS {sign:?} {} (restart {restart}, {proposals} proposals)\nwindows {}\nsolution:\n",
                        fmt_q(&s),
                        ws.join(" ")
                    );
                    for line in solution.to_text().lines() {
                        t += &format!("  {line}\n");
                    }
                    t
                }
                AnnealOutcome::Failure { restarts, proposals, best_energy } => format!(
                    "FAILURE after {restarts} restarts x {proposals} proposals (best energy {best_energy:.6}); evidence only, not an obstruction\n"
                ),
            })?;
        }
        Cmd::Surgery { input, basis, flip_orientation, cusp, sweep } => {
            let basis = parse_basis(&basis, flip_orientation)?;
            let inp = load(&input)?;
            check_cusp(&inp, cusp)?;
            let report = realizable_interval(&inp.name, &inp.tracks, &sweep.budget())?;
            let surgery = surgery_report(&report, cusp, &basis)?;
            emit(fmt, &surgery, || {
                let slopes: Vec<String> =
                    report.cusps[cusp].realizable_slopes().iter().map(ToString::to_string).collect();
                format!(
                    "realizable chart slopes {{{}}}\ndegeneracy coefficient {}\nadmissible {}\nobstructed {}\nunknown {}\n",
                    slopes.join(", "),
                    surgery.degeneracy_coefficient,
                    surgery.admissible.join(" u "),
                    surgery.obstructed.join(" u "),
                    surgery.unknown
                )
            })?;
        }
        Cmd::Census { file, filter, jobs, out, sweep } => {
            let started = Instant::now();
            let result = scan_census(&file, &filter, jobs, &sweep.budget())?;
            eprintln!("scanned in {:.1}s", started.elapsed().as_secs_f64());
            if let Some(path) = out {
                let f = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                write_rows_csv(&result.rows, std::io::BufWriter::new(f))?;
            }
            let sum = &result.summary;
            emit(fmt, sum, || {
                let mut s = format!(
                    "total {}\nfailed {}\nsingle-cusp {}\nmatched ({filter:?}) {}\ninvariant violations {}\n",
                    sum.total, sum.failed, sum.single_cusp, sum.matched, sum.invariant_violations
                );
                if filter == Filter::TwoLaddersSingleCusp {
                    let _ = writeln!(s, "reference count 31138, difference {:+}", sum.matched as i64 - 31138);
                }
                let _ = writeln!(s, "single-cusp ladder histogram {:?}", sum.single_cusp_histogram);
                let _ = writeln!(s, "per-cusp ladder histogram {:?}", sum.cusp_histogram);
                for e in result.unreadable.iter().take(10) {
                    let _ = writeln!(s, "unreadable line {}: {} ({})", e.line, e.text, e.error);
                }
                s
            })?;
            return Ok(sum.invariant_violations > 0);
        }
    }
    Ok(false)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<std::io::Error>().is_some() {
        return INPUT_INVALID;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Infeasible(_) | Error::Ladder(_) | Error::Pl(_) | Error::NonTorusCusp(_)) => INVARIANT_VIOLATION,
        _ => INPUT_INVALID,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(INVARIANT_VIOLATION),
        Err(e) => {
            eprintln!("vh: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
