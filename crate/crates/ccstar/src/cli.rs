//! Command-line front end: parse code definition files, run the construction
//! and tiling analyses, and emit deterministic reports.
//!
//! Commands: `info` summarises the construction, `check` decides a supplied
//! shift set, `suggest` runs the pruned representative selection, and
//! `search` exhausts all shift sets. Each report is rendered either as a
//! human-readable table or as canonical JSON whose bytes depend only on the
//! input file and flags. Exit codes: 0 success (for `check`: the translates
//! tile), 1 checked-and-false, 2 input error, 3 precondition violation.

use crate::constellation::{ConstellationError, ConstellationPair, PointSet};
use crate::gf2::{decompose_cosets, BinaryWord, CosetDecomposition, Gf2Error, LeaderPolicy, LinearCode};
use crate::layered::{LayeredWord, Point};
use crate::tiling::{
    check_shift_membership, check_tiling, enumerate_all_tilings, select_class_representatives,
    schur_shifts_vanish, Counterexample, MembershipBlocker, SelectionTrace, ShiftMembership,
    TilingError, TilingReport, Verdict,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "ccstar",
    version,
    about = "Construct multilevel constellations from binary codes and analyse their tilings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summarise the construction derived from a code file.
    Info(CommonArgs),
    /// Decide whether the translates of the code's points tile the
    /// constellation for the given shift set.
    Check(CheckArgs),
    /// Run the pruned search for valid class-representative shift sets
    /// (requires a lattice constellation).
    Suggest(SuggestArgs),
    /// Exhaustively enumerate every zero-containing shift set that tiles.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Path to the code definition file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Output rendering: human table or canonical machine-readable JSON.
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Shift point as comma-separated decimal coordinates (e.g. "4" or
    /// "4,0"); repeatable. Overrides z= and d= lines from the file.
    #[arg(long = "z", value_name = "POINT")]
    pub z: Vec<String>,
}

#[derive(Args, Debug)]
pub struct SuggestArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Show every candidate shift set instead of only the first.
    #[arg(long)]
    pub all: bool,
    /// Collapse each coset onto its best aligned word before the search.
    #[arg(long)]
    pub coset_filter: bool,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Refuse searches that would need more than this many translates.
    #[arg(long, default_value_t = 65536)]
    pub bound: u64,
    /// Draw candidate shifts only from the selection-pruned pool
    /// (requires a lattice constellation).
    #[arg(long)]
    pub coset_filter: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Canonical,
}

/// Exit codes used by every subcommand.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKED_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// A failure with its process exit code and a diagnostic for stderr.
#[derive(Debug)]
pub struct CliFailure {
    pub code: i32,
    pub message: String,
}

impl CliFailure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PRECONDITION,
            message: message.into(),
        }
    }
}

fn constellation_failure(err: ConstellationError) -> CliFailure {
    match &err {
        // The enumeration guard refuses well-formed but oversized inputs.
        ConstellationError::Code(Gf2Error::EnumerationTooLarge { .. }) => {
            CliFailure::precondition(err.to_string())
        }
        _ => CliFailure::input(err.to_string()),
    }
}

fn tiling_failure(err: TilingError) -> CliFailure {
    match &err {
        TilingError::NotWithinAmbient { .. }
        | TilingError::MissingZero { .. }
        | TilingError::NotAGroup
        | TilingError::NotALattice
        | TilingError::SearchTooLarge { .. } => CliFailure::precondition(err.to_string()),
        TilingError::Code(Gf2Error::EnumerationTooLarge { .. }) => {
            CliFailure::precondition(err.to_string())
        }
        TilingError::Code(_) | TilingError::Layered(_) => CliFailure::input(err.to_string()),
        TilingError::Constellation(_) => CliFailure::input(err.to_string()),
    }
}

/// Run a parsed invocation: print its report to stdout (or a diagnostic to
/// stderr) and return the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Info(args) => cmd_info(args),
        Command::Check(args) => cmd_check(args),
        Command::Suggest(args) => cmd_suggest(args),
        Command::Search(args) => cmd_search(args),
    };
    match outcome {
        Ok((rendered, code)) => {
            print!("{rendered}");
            code
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

// ---------------------------------------------------------------------------
// Code definition files
// ---------------------------------------------------------------------------

/// Parsed contents of a code definition file.
#[derive(Clone, Debug)]
pub struct CodeSpecFile {
    pub width: usize,
    pub levels: usize,
    pub generators: Vec<BinaryWord>,
    /// Nonzero coset-representative words from d= lines, in file order.
    pub representatives: Option<Vec<BinaryWord>>,
    /// Shift points from z= lines, in file order.
    pub z_set: Option<Vec<Point>>,
}

/// Parse the key-value file format: `n=<int>`, `L=<int>`, repeatable
/// `g=<bitstring>` generator rows, optional repeatable `d=<bitstring>`
/// nonzero representative words (the zero word is implicit), optional
/// repeatable `z=<coords>` shift points as comma-separated decimals. Lines
/// whose first non-blank character is `#` are comments.
pub fn parse_spec(text: &str) -> Result<CodeSpecFile, CliFailure> {
    let fail = |line: usize, message: String| {
        CliFailure::input(format!("line {line}: {message}"))
    };

    // First pass: split into key/value entries and fix the geometry.
    let mut entries: Vec<(usize, &str, &str)> = Vec::new();
    let mut width: Option<(usize, usize)> = None;
    let mut levels: Option<(usize, usize)> = None;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(fail(line_no, format!("expected key=value, got {line:?}")));
        };
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(fail(line_no, format!("empty value for key {key:?}")));
        }
        match key {
            "n" | "L" => {
                let target = if key == "n" { &mut width } else { &mut levels };
                if let Some((first_line, _)) = target {
                    return Err(fail(
                        line_no,
                        format!("duplicate {key}= (first given on line {first_line})"),
                    ));
                }
                let parsed: usize = value.parse().map_err(|_| {
                    fail(line_no, format!("{key}= needs a positive integer, got {value:?}"))
                })?;
                *target = Some((line_no, parsed));
            }
            "g" | "d" | "z" => entries.push((line_no, key, value)),
            _ => return Err(fail(line_no, format!("unknown key {key:?}"))),
        }
    }
    let Some((_, width)) = width else {
        return Err(CliFailure::input("missing n= line".to_string()));
    };
    let Some((_, levels)) = levels else {
        return Err(CliFailure::input("missing L= line".to_string()));
    };
    if width == 0 {
        return Err(CliFailure::input("n= must be at least 1".to_string()));
    }
    if levels == 0 || levels > crate::layered::MAX_LEVELS {
        return Err(CliFailure::input(format!(
            "L= must lie in 1..={}, got {levels}",
            crate::layered::MAX_LEVELS
        )));
    }
    let word_len = width * levels;

    // Second pass: parse the payload lines against the fixed geometry.
    let mut generators = Vec::new();
    let mut representatives = Vec::new();
    let mut z_set = Vec::new();
    for (line_no, key, value) in entries {
        match key {
            "g" | "d" => {
                let word: BinaryWord = value.parse().map_err(|e| {
                    fail(line_no, format!("bad bit-string {value:?}: {e}"))
                })?;
                if word.len() != word_len {
                    return Err(fail(
                        line_no,
                        format!(
                            "bit-string has length {}, expected n·L = {word_len}",
                            word.len()
                        ),
                    ));
                }
                if key == "g" {
                    generators.push(word);
                } else {
                    if word.is_zero() {
                        return Err(fail(
                            line_no,
                            "the zero representative is implicit; list only nonzero d= words"
                                .to_string(),
                        ));
                    }
                    representatives.push(word);
                }
            }
            "z" => {
                let point = parse_point(value, width, levels)
                    .map_err(|message| fail(line_no, message))?;
                z_set.push(point);
            }
            _ => unreachable!("first pass admits only g/d/z entries"),
        }
    }

    Ok(CodeSpecFile {
        width,
        levels,
        generators,
        representatives: if representatives.is_empty() {
            None
        } else {
            Some(representatives)
        },
        z_set: if z_set.is_empty() { None } else { Some(z_set) },
    })
}

/// Parse one point given as comma-separated decimal coordinates.
fn parse_point(text: &str, width: usize, levels: usize) -> Result<Point, String> {
    let coords: Vec<u64> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad coordinate {:?}", part.trim()))
        })
        .collect::<Result<_, _>>()?;
    if coords.len() != width {
        return Err(format!(
            "point has {} coordinates, expected n = {width}",
            coords.len()
        ));
    }
    Point::new(coords, levels).map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// Report structure (canonical JSON + human rendering share it)
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct Report {
    version: String,
    command: String,
    input_digest: String,
    result: Payload,
}

#[derive(Serialize)]
struct WordPoint {
    word: String,
    point: String,
}

#[derive(Serialize)]
struct ProjectionEntry {
    level: usize,
    dim: usize,
    generators: Vec<String>,
}

#[derive(Serialize)]
struct Conditions {
    schur_shifts_vanish: Option<bool>,
    disjoint_differences: bool,
    cardinality_matches: bool,
}

#[derive(Serialize)]
struct DecompositionEntry {
    point: String,
    tile_point: String,
    shift: String,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum CounterexampleJson {
    NonzeroIntersection {
        point: String,
    },
    SumOutsideAmbient {
        tile_point: String,
        shift: String,
        sum: String,
    },
    MultipleDecompositions {
        point: String,
        first_tile_point: String,
        first_shift: String,
        second_tile_point: String,
        second_shift: String,
    },
    Uncovered {
        point: String,
    },
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum MembershipJson {
    Holds,
    NotApplicable {
        reason: String,
        codeword: Option<String>,
        representative: Option<String>,
    },
    Violated {
        codeword: String,
        representative: String,
        shift: String,
    },
}

#[derive(Serialize)]
struct TraceJson {
    initial: Vec<WordPoint>,
    after_negation_pruning: Vec<WordPoint>,
    after_difference_pruning: Vec<WordPoint>,
    after_coset_filter: Option<Vec<WordPoint>>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Payload {
    Info {
        width: usize,
        levels: usize,
        code_dim: usize,
        code_size: u64,
        generators: Vec<String>,
        had_dependent_rows: bool,
        projections: Vec<ProjectionEntry>,
        product_dim: usize,
        product_size: u64,
        class_count: u64,
        lattice: bool,
        tile_points: Vec<String>,
        constellation_points: Vec<String>,
    },
    Check {
        shifts_from: String,
        shifts: Vec<String>,
        representatives: Option<Vec<String>>,
        verdict: String,
        conditions: Conditions,
        decomposition: Option<Vec<DecompositionEntry>>,
        counterexample: Option<CounterexampleJson>,
        membership: Option<MembershipJson>,
    },
    Suggest {
        class_count: u64,
        coset_filter: bool,
        showing_all: bool,
        trace: TraceJson,
        candidate_count: usize,
        candidates: Vec<Vec<WordPoint>>,
    },
    Search {
        bound: u64,
        class_count: u64,
        coset_filter: bool,
        pool_size: usize,
        solution_count: usize,
        solutions: Vec<Vec<String>>,
    },
}

fn counted(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("{n} {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn point_string(point: &Point) -> String {
    let mut out = String::new();
    for (i, c) in point.coords().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{c}");
    }
    out
}

fn point_set_strings(set: &PointSet) -> Vec<String> {
    set.iter().map(point_string).collect()
}

fn word_point(word: &BinaryWord, width: usize, levels: usize) -> WordPoint {
    let point = LayeredWord::new(word.clone(), width, levels)
        .expect("words were validated against the geometry")
        .psi();
    WordPoint {
        word: word.to_string(),
        point: point_string(&point),
    }
}

fn word_points(words: &[BinaryWord], width: usize, levels: usize) -> Vec<WordPoint> {
    words.iter().map(|w| word_point(w, width, levels)).collect()
}

// ---------------------------------------------------------------------------
// Shared command plumbing
// ---------------------------------------------------------------------------

struct LoadedSpec {
    spec: CodeSpecFile,
    pair: ConstellationPair,
    digest: String,
}

fn load(path: &Path) -> Result<LoadedSpec, CliFailure> {
    let bytes = std::fs::read(path).map_err(|e| {
        CliFailure::input(format!("cannot read {}: {e}", path.display()))
    })?;
    let mut digest = String::with_capacity(71);
    digest.push_str("sha256:");
    for byte in Sha256::digest(&bytes).iter() {
        let _ = write!(digest, "{byte:02x}");
    }
    let text = String::from_utf8(bytes).map_err(|_| {
        CliFailure::input(format!("{} is not valid UTF-8", path.display()))
    })?;
    let spec = parse_spec(&text)?;
    let code = LinearCode::from_generators(
        spec.width * spec.levels,
        spec.generators.clone(),
    )
    .map_err(|e| CliFailure::input(e.to_string()))?;
    let pair = ConstellationPair::build(code, spec.width, spec.levels)
        .map_err(constellation_failure)?;
    Ok(LoadedSpec { spec, pair, digest })
}

fn render(report: &Report, format: Format, human: String) -> String {
    match format {
        Format::Human => human,
        Format::Canonical => {
            let mut json = serde_json::to_string_pretty(report)
                .expect("reports contain no non-serializable data");
            json.push('\n');
            json
        }
    }
}

// ---------------------------------------------------------------------------
// info
// ---------------------------------------------------------------------------

fn cmd_info(args: &CommonArgs) -> Result<(String, i32), CliFailure> {
    let loaded = load(&args.spec)?;
    let pair = &loaded.pair;

    let projections: Vec<ProjectionEntry> = pair
        .projections()
        .iter()
        .enumerate()
        .map(|(level, code)| ProjectionEntry {
            level,
            dim: code.dim(),
            generators: code.generators().iter().map(|g| g.to_string()).collect(),
        })
        .collect();

    let report = Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: "info".to_string(),
        input_digest: loaded.digest.clone(),
        result: Payload::Info {
            width: pair.width(),
            levels: pair.levels(),
            code_dim: pair.code_dim(),
            code_size: pair.code().size(),
            generators: pair
                .code()
                .generators()
                .iter()
                .map(|g| g.to_string())
                .collect(),
            had_dependent_rows: pair.code().had_dependent_rows(),
            projections,
            product_dim: pair.product_dim(),
            product_size: pair.product_code().size(),
            class_count: pair.class_count(),
            lattice: pair.is_lattice(),
            tile_points: point_set_strings(pair.code_points()),
            constellation_points: point_set_strings(pair.product_points()),
        },
    };

    let mut h = String::new();
    let _ = writeln!(h, "ccstar {} — info", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(h, "input: {}", report.input_digest);
    let _ = writeln!(
        h,
        "geometry: n={} bits per layer, L={} levels",
        pair.width(),
        pair.levels()
    );
    let _ = writeln!(
        h,
        "code: dimension {} ({} words){}",
        pair.code_dim(),
        pair.code().size(),
        if pair.code().had_dependent_rows() {
            ", supplied rows were dependent"
        } else {
            ""
        }
    );
    for g in pair.code().generators() {
        let _ = writeln!(h, "  g = {g}");
    }
    let _ = writeln!(h, "projections:");
    for (level, code) in pair.projections().iter().enumerate() {
        let gens: Vec<String> = code.generators().iter().map(|g| g.to_string()).collect();
        let _ = writeln!(
            h,
            "  level {level}: dimension {}{}",
            code.dim(),
            if gens.is_empty() {
                " (zero code)".to_string()
            } else {
                format!(", generators {}", gens.join(" "))
            }
        );
    }
    let _ = writeln!(
        h,
        "product code: dimension {} ({} words)",
        pair.product_dim(),
        pair.product_code().size()
    );
    let _ = writeln!(h, "class count: {}", pair.class_count());
    let _ = writeln!(
        h,
        "lattice: {}",
        if pair.is_lattice() { "yes" } else { "no" }
    );
    let _ = writeln!(
        h,
        "tile Y ({}): {}",
        counted(pair.code_points().len(), "point"),
        pair.code_points()
    );
    let _ = writeln!(
        h,
        "constellation X ({}): {}",
        counted(pair.product_points().len(), "point"),
        pair.product_points()
    );

    Ok((render(&report, args.format, h), EXIT_OK))
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

enum ShiftSource {
    Flags(Vec<Point>),
    FilePoints(Vec<Point>),
    Representatives(CosetDecomposition),
}

fn resolve_shifts(args: &CheckArgs, loaded: &LoadedSpec) -> Result<ShiftSource, CliFailure> {
    let spec = &loaded.spec;
    if !args.z.is_empty() {
        let points = args
            .z
            .iter()
            .map(|text| {
                parse_point(text, spec.width, spec.levels)
                    .map_err(|message| CliFailure::input(format!("--z {text:?}: {message}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(ShiftSource::Flags(points));
    }
    if let Some(z_set) = &spec.z_set {
        return Ok(ShiftSource::FilePoints(z_set.clone()));
    }
    if let Some(nonzero) = &spec.representatives {
        let mut all = Vec::with_capacity(nonzero.len() + 1);
        all.push(BinaryWord::zero(spec.width * spec.levels));
        all.extend(nonzero.iter().cloned());
        let decomposition = decompose_cosets(
            loaded.pair.code(),
            loaded.pair.product_code(),
            LeaderPolicy::Explicit(all),
        )
        .map_err(|e| CliFailure::input(format!("d= words are not valid representatives: {e}")))?;
        return Ok(ShiftSource::Representatives(decomposition));
    }
    Err(CliFailure::input(
        "check needs a shift set: give --z points, z= lines, or d= lines".to_string(),
    ))
}

fn counterexample_json(ce: &Counterexample) -> CounterexampleJson {
    match ce {
        Counterexample::NonzeroIntersection { point } => CounterexampleJson::NonzeroIntersection {
            point: point_string(point),
        },
        Counterexample::SumOutsideAmbient {
            tile_point,
            shift,
            sum,
        } => CounterexampleJson::SumOutsideAmbient {
            tile_point: point_string(tile_point),
            shift: point_string(shift),
            sum: point_string(sum),
        },
        Counterexample::MultipleDecompositions {
            point,
            first,
            second,
        } => CounterexampleJson::MultipleDecompositions {
            point: point_string(point),
            first_tile_point: point_string(&first.0),
            first_shift: point_string(&first.1),
            second_tile_point: point_string(&second.0),
            second_shift: point_string(&second.1),
        },
        Counterexample::Uncovered { point } => CounterexampleJson::Uncovered {
            point: point_string(point),
        },
    }
}

fn membership_json(m: &ShiftMembership) -> MembershipJson {
    match m {
        ShiftMembership::Holds => MembershipJson::Holds,
        ShiftMembership::NotApplicable(MembershipBlocker::VerdictNotTiling) => {
            MembershipJson::NotApplicable {
                reason: "verdict_not_tiling".to_string(),
                codeword: None,
                representative: None,
            }
        }
        ShiftMembership::NotApplicable(MembershipBlocker::SecondOrderShiftNonzero {
            codeword,
            representative,
        }) => MembershipJson::NotApplicable {
            reason: "second_order_shift_nonzero".to_string(),
            codeword: Some(codeword.to_string()),
            representative: Some(representative.to_string()),
        },
        ShiftMembership::Violated {
            codeword,
            representative,
            shift,
        } => MembershipJson::Violated {
            codeword: codeword.to_string(),
            representative: representative.to_string(),
            shift: shift.to_string(),
        },
    }
}

fn cmd_check(args: &CheckArgs) -> Result<(String, i32), CliFailure> {
    let loaded = load(&args.common.spec)?;
    let pair = &loaded.pair;
    let source = resolve_shifts(args, &loaded)?;

    let (shifts_from, shift_points, representatives): (&str, Vec<Point>, Option<Vec<BinaryWord>>) =
        match &source {
            ShiftSource::Flags(points) => ("command_line", points.clone(), None),
            ShiftSource::FilePoints(points) => ("file_points", points.clone(), None),
            ShiftSource::Representatives(decomposition) => {
                let words = decomposition.representatives().to_vec();
                let points = words
                    .iter()
                    .map(|w| {
                        LayeredWord::new(w.clone(), pair.width(), pair.levels())
                            .expect("validated representative geometry")
                            .psi()
                    })
                    .collect();
                ("file_representatives", points, Some(words))
            }
        };

    let shifts = PointSet::from_points(pair.width(), pair.levels(), shift_points)
        .map_err(|e| CliFailure::input(e.to_string()))?;

    let mut report = check_tiling(pair.product_points(), pair.code_points(), &shifts)
        .map_err(tiling_failure)?;

    let membership = match &representatives {
        Some(words) => {
            report.flags.schur_shifts_vanish =
                Some(schur_shifts_vanish(pair, words).map_err(tiling_failure)?);
            Some(check_shift_membership(pair, words, &report).map_err(tiling_failure)?)
        }
        None => None,
    };

    let verdict_is_tiling = report.verdict == Verdict::Tiling;
    let payload = Payload::Check {
        shifts_from: shifts_from.to_string(),
        shifts: point_set_strings(&shifts),
        representatives: representatives
            .as_ref()
            .map(|words| words.iter().map(|w| w.to_string()).collect()),
        verdict: match report.verdict {
            Verdict::Tiling => "tiling".to_string(),
            Verdict::NotTiling => "not_tiling".to_string(),
        },
        conditions: Conditions {
            schur_shifts_vanish: report.flags.schur_shifts_vanish,
            disjoint_differences: report.flags.disjoint_differences,
            cardinality_matches: report.flags.cardinality_matches,
        },
        decomposition: report.decomposition.as_ref().map(|table| {
            table
                .iter()
                .map(|(x, (y, z))| DecompositionEntry {
                    point: point_string(x),
                    tile_point: point_string(y),
                    shift: point_string(z),
                })
                .collect()
        }),
        counterexample: report.counterexample.as_ref().map(counterexample_json),
        membership: membership.as_ref().map(membership_json),
    };

    let out = Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: "check".to_string(),
        input_digest: loaded.digest.clone(),
        result: payload,
    };

    let human = human_check(
        pair,
        &loaded.digest,
        &shifts,
        shifts_from,
        &representatives,
        &report,
        &membership,
    );
    let code = if verdict_is_tiling {
        EXIT_OK
    } else {
        EXIT_CHECKED_FALSE
    };
    Ok((render(&out, args.common.format, human), code))
}

fn human_check(
    pair: &ConstellationPair,
    digest: &str,
    shifts: &PointSet,
    shifts_from: &str,
    representatives: &Option<Vec<BinaryWord>>,
    report: &TilingReport,
    membership: &Option<ShiftMembership>,
) -> String {
    let mut h = String::new();
    let _ = writeln!(h, "ccstar {} — check", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(h, "input: {digest}");
    let _ = writeln!(
        h,
        "shifts from {}: Z ({}) = {}",
        match shifts_from {
            "command_line" => "--z flags",
            "file_points" => "z= lines",
            _ => "d= representatives",
        },
        counted(shifts.len(), "point"),
        shifts
    );
    if let Some(words) = representatives {
        let rendered: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(h, "representatives: {}", rendered.join(" "));
    }
    let _ = writeln!(
        h,
        "tile Y ({}), constellation X ({})",
        counted(pair.code_points().len(), "point"),
        counted(pair.product_points().len(), "point")
    );
    let _ = writeln!(h, "verdict: {}", report.verdict);
    let _ = writeln!(h, "conditions:");
    let _ = writeln!(
        h,
        "  shifted products vanish: {}",
        match report.flags.schur_shifts_vanish {
            Some(true) => "yes",
            Some(false) => "no",
            None => "unknown (shifts were given as raw points)",
        }
    );
    let _ = writeln!(
        h,
        "  difference sets meet only in zero: {}",
        if report.flags.disjoint_differences {
            "yes"
        } else {
            "no"
        }
    );
    let _ = writeln!(
        h,
        "  cardinalities match: {} ({} × {} vs {})",
        if report.flags.cardinality_matches {
            "yes"
        } else {
            "no"
        },
        pair.code_points().len(),
        shifts.len(),
        pair.product_points().len()
    );
    match (&report.decomposition, &report.counterexample) {
        (Some(table), _) => {
            let _ = writeln!(h, "decomposition ({}):", counted(table.len(), "point"));
            for (x, (y, z)) in table {
                let _ = writeln!(h, "  {x} = {y} + {z}");
            }
        }
        (None, Some(ce)) => {
            let _ = writeln!(h, "counterexample: {ce}");
        }
        (None, None) => unreachable!("a report always carries one of the two"),
    }
    if let Some(m) = membership {
        let _ = writeln!(h, "shift membership: {m}");
    }
    h
}

// ---------------------------------------------------------------------------
// suggest
// ---------------------------------------------------------------------------

fn cmd_suggest(args: &SuggestArgs) -> Result<(String, i32), CliFailure> {
    let loaded = load(&args.common.spec)?;
    let pair = &loaded.pair;
    let trace = select_class_representatives(pair, args.coset_filter).map_err(tiling_failure)?;

    let (width, levels) = (pair.width(), pair.levels());
    let shown: &[Vec<BinaryWord>] = if args.all || trace.candidates.is_empty() {
        &trace.candidates
    } else {
        &trace.candidates[..1]
    };

    let report = Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: "suggest".to_string(),
        input_digest: loaded.digest.clone(),
        result: Payload::Suggest {
            class_count: pair.class_count(),
            coset_filter: args.coset_filter,
            showing_all: args.all,
            trace: TraceJson {
                initial: word_points(&trace.initial, width, levels),
                after_negation_pruning: word_points(&trace.after_negation_pruning, width, levels),
                after_difference_pruning: word_points(
                    &trace.after_difference_pruning,
                    width,
                    levels,
                ),
                after_coset_filter: trace
                    .after_coset_filter
                    .as_ref()
                    .map(|list| word_points(list, width, levels)),
            },
            candidate_count: trace.candidates.len(),
            candidates: shown
                .iter()
                .map(|words| word_points(words, width, levels))
                .collect(),
        },
    };

    let human = human_suggest(pair, &loaded.digest, &trace, shown, args);
    Ok((render(&report, args.common.format, human), EXIT_OK))
}

fn human_suggest(
    pair: &ConstellationPair,
    digest: &str,
    trace: &SelectionTrace,
    shown: &[Vec<BinaryWord>],
    args: &SuggestArgs,
) -> String {
    let (width, levels) = (pair.width(), pair.levels());
    let stage = |h: &mut String, name: &str, words: &[BinaryWord]| {
        let rendered: Vec<String> = words
            .iter()
            .map(|w| {
                let p = LayeredWord::new(w.clone(), width, levels)
                    .expect("trace words share the geometry")
                    .psi();
                format!("{w}({p})")
            })
            .collect();
        let _ = writeln!(
            h,
            "{name} ({}): {}",
            counted(words.len(), "word"),
            rendered.join(" ")
        );
    };

    let mut h = String::new();
    let _ = writeln!(h, "ccstar {} — suggest", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(h, "input: {digest}");
    let _ = writeln!(
        h,
        "lattice constellation, class count {}",
        pair.class_count()
    );
    stage(&mut h, "candidate pool", &trace.initial);
    stage(&mut h, "after negation pruning", &trace.after_negation_pruning);
    stage(
        &mut h,
        "after difference pruning",
        &trace.after_difference_pruning,
    );
    if let Some(filtered) = &trace.after_coset_filter {
        stage(&mut h, "after coset filter", filtered);
    }
    let _ = writeln!(h, "candidate shift sets: {}", trace.candidates.len());
    for (index, words) in shown.iter().enumerate() {
        let z = &trace.z_sets[index];
        let rendered: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(h, "  #{index}: Z = {z} from {}", rendered.join(" "));
    }
    if !args.all && trace.candidates.len() > shown.len() {
        let _ = writeln!(
            h,
            "  ({} more; rerun with --all to list every candidate)",
            trace.candidates.len() - shown.len()
        );
    }
    h
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

fn cmd_search(args: &SearchArgs) -> Result<(String, i32), CliFailure> {
    let loaded = load(&args.common.spec)?;
    let pair = &loaded.pair;

    let restrict = if args.coset_filter {
        let trace = select_class_representatives(pair, true).map_err(tiling_failure)?;
        let pool = trace
            .after_coset_filter
            .expect("requested filter is always present in the trace");
        let points = pool
            .iter()
            .map(|w| {
                LayeredWord::new(w.clone(), pair.width(), pair.levels())
                    .expect("pool words share the geometry")
                    .psi()
            })
            .collect::<Vec<_>>();
        Some(
            PointSet::from_points(pair.width(), pair.levels(), points)
                .expect("pool points share the geometry"),
        )
    } else {
        None
    };

    let solutions = enumerate_all_tilings(
        pair.product_points(),
        pair.code_points(),
        restrict.as_ref(),
        args.bound,
    )
    .map_err(tiling_failure)?;

    let pool_size = restrict
        .as_ref()
        .map_or(pair.product_points().len(), |set| set.len());

    let report = Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: "search".to_string(),
        input_digest: loaded.digest.clone(),
        result: Payload::Search {
            bound: args.bound,
            class_count: (pair.product_points().len() / pair.code_points().len()) as u64,
            coset_filter: args.coset_filter,
            pool_size,
            solution_count: solutions.len(),
            solutions: solutions.iter().map(point_set_strings).collect(),
        },
    };

    let mut h = String::new();
    let _ = writeln!(h, "ccstar {} — search", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(h, "input: {}", loaded.digest);
    let _ = writeln!(
        h,
        "tile Y ({}) in constellation X ({}); {} needed",
        counted(pair.code_points().len(), "point"),
        counted(pair.product_points().len(), "point"),
        counted(
            pair.product_points().len() / pair.code_points().len(),
            "translate"
        )
    );
    let _ = writeln!(
        h,
        "candidate pool: {}{}",
        counted(pool_size, "point"),
        if args.coset_filter {
            " (selection-pruned)"
        } else {
            ""
        }
    );
    let _ = writeln!(h, "solutions: {}", solutions.len());
    for (index, z) in solutions.iter().enumerate() {
        let _ = writeln!(h, "  #{index}: Z = {z}");
    }

    Ok((render(&report, args.common.format, h), EXIT_OK))
}
