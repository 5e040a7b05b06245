//! `shapelift`: exact computations for basic 4-dimensional toric domains.
//!
//! Subcommands cover shape-invariant and knotted-region membership, path
//! lifting verdicts, capacity sequences, lattice counts, the ellipsoid
//! embedding criterion, witness-based embedding obstructions, index
//! arithmetic, the built-in verification suite, and SVG figures.
//!
//! Exit codes: 0 for definitive verdicts, 2 for undetermined or
//! inconclusive outcomes, 1 for input errors. Reports go to standard
//! output, diagnostics to standard error.

mod report;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use shapelift_core::domains::ToricDomain;
use shapelift_core::echlattice::{
    cap_sequence, ech_capacity, lattice_count, CountMode, EmbedOutcome,
};
use shapelift_core::geom::{LinearForm, Point, PolyPath};
use shapelift_core::obstruct::{conclude, Conclusion, ObstructionInstance, Witness};
use shapelift_core::pathlift::{classify, general_criterion, LiftVerdict};
use shapelift_core::sftindex::{
    building_totals, index_bidegree, index_general, index_torus_ends, BuildingData,
};
use shapelift_core::shape::{
    emb_knotted_member, knotted_member, shape_member, unknotted_threshold, ShapeRegion,
    ThresholdFamily,
};
use shapelift_core::verify::run_suite;
use shapelift_core::Rat;

use report::Report;
use svg::{clipped_region, LabeledPath, Scene, TaggedRegion};

#[derive(Parser)]
#[command(name = "shapelift", version, about = "Exact toric-domain computations")]
struct Cli {
    /// Emit the full JSON report instead of a human-readable line.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Membership of an area class in the reduced shape invariant.
    Shape(ShapeArgs),
    /// Membership in a knotted-torus region, or threshold queries.
    Knotted(KnottedArgs),
    /// Classify whether a path of area classes lifts.
    Lift(LiftArgs),
    /// Capacity sequence of an ellipsoid.
    Capacity(CapacityArgs),
    /// Lattice-point count of a right triangle.
    Lattice(LatticeArgs),
    /// Sequence-comparison test for an ellipsoid embedding.
    Embed(EmbedArgs),
    /// Witness-based obstruction to embedding into an ellipsoid.
    Obstruct(ObstructArgs),
    /// Index and building arithmetic.
    #[command(subcommand)]
    Sft(SftCommand),
    /// Run the built-in verification suite.
    Verify,
    /// Draw a domain with optional shaded regions and paths.
    Plot(PlotArgs),
}

#[derive(Args)]
struct ShapeArgs {
    /// Domain JSON file.
    #[arg(long)]
    domain: PathBuf,
    /// Area class as `r,s` with exact rationals.
    #[arg(long)]
    point: String,
}

#[derive(Args)]
struct KnottedArgs {
    #[arg(long)]
    domain: PathBuf,
    /// Area class as `r,s`; required unless `--threshold` is given.
    #[arg(long)]
    point: Option<String>,
    /// Check the region relative to an embedding of E(1, x) instead.
    #[arg(long, value_name = "X")]
    via_embedding: Option<String>,
    /// Print the minimal unknotted-image capacity for E(1, x) instead.
    #[arg(long, value_name = "X")]
    threshold: Option<String>,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    domain: PathBuf,
    /// Path JSON file: an array of `[r, s]` rational pairs.
    #[arg(long)]
    path: PathBuf,
    /// Comma-separated breakpoints for the general criterion.
    #[arg(long)]
    breakpoints: Option<String>,
    /// Write an SVG figure of the scene.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct CapacityArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    /// Print entries 0..=count.
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Print a single entry instead.
    #[arg(long)]
    index: Option<usize>,
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    t: String,
    #[arg(long, value_enum, default_value_t = ModeArg::RowSum)]
    mode: ModeArg,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    RowSum,
    Brute,
}

#[derive(Args)]
struct EmbedArgs {
    /// Source ellipsoid parameters as `a,b`.
    #[arg(long)]
    from: String,
    /// Target ellipsoid parameters as `a,b`.
    #[arg(long)]
    into: String,
    #[arg(long, default_value_t = 1000)]
    horizon: usize,
}

#[derive(Args)]
struct ObstructArgs {
    /// Source domain JSON file.
    #[arg(long)]
    source: PathBuf,
    /// Target domain JSON file (ball or integral ellipsoid).
    #[arg(long)]
    target: PathBuf,
    /// Witness JSON file: {"inner": [e_r, e_s], "path": [[r, s], ...]}.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Grid denominator for the witness search (resolution 1/N).
    #[arg(long, value_name = "N", default_value_t = 4)]
    search: u32,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SftCommand {
    /// Fredholm index from positive-end totals and negative torus ends.
    Index(SftIndexArgs),
    /// Index in the two-sphere compactification from a bidegree.
    Bidegree(SftBidegreeArgs),
    /// Total area and index of a glued building.
    Building(SftBuildingArgs),
}

#[derive(Args)]
struct SftIndexArgs {
    /// Comma-separated positive-end contributions (CZ + dim/2), rationals.
    #[arg(long, default_value = "")]
    pos: String,
    /// Semicolon-separated negative end pairs `m:n`.
    #[arg(long, default_value = "")]
    neg: String,
    /// Relative first Chern number; when given, `--neg-terms` supplies the
    /// negative contributions directly.
    #[arg(long)]
    c1: Option<i64>,
    /// Comma-separated negative-end contributions (CZ - dim/2), rationals.
    #[arg(long, default_value = "")]
    neg_terms: String,
}

#[derive(Args)]
struct SftBidegreeArgs {
    #[arg(long, default_value = "")]
    neg: String,
    #[arg(long)]
    d1: i64,
    #[arg(long)]
    d2: i64,
}

#[derive(Args)]
struct SftBuildingArgs {
    /// Comma-separated component indices.
    #[arg(long)]
    indices: String,
    /// Comma-separated matched leaf dimensions.
    #[arg(long, default_value = "")]
    dims: String,
    /// Comma-separated component areas, rationals.
    #[arg(long)]
    areas: String,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    domain: PathBuf,
    #[arg(long)]
    svg: PathBuf,
    /// Optional path JSON file to draw.
    #[arg(long)]
    path: Option<PathBuf>,
    /// Regions to shade: `knotted`, `flexible`, or both.
    #[arg(long, value_delimiter = ',')]
    shade: Vec<String>,
}

struct Failure {
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            message: e.to_string(),
        }
    }
}

type Run = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> Run {
    match &cli.command {
        Command::Shape(args) => run_shape(cli, args),
        Command::Knotted(args) => run_knotted(cli, args),
        Command::Lift(args) => run_lift(cli, args),
        Command::Capacity(args) => run_capacity(cli, args),
        Command::Lattice(args) => run_lattice(cli, args),
        Command::Embed(args) => run_embed(cli, args),
        Command::Obstruct(args) => run_obstruct(cli, args),
        Command::Sft(args) => run_sft(cli, args),
        Command::Verify => run_verify(cli),
        Command::Plot(args) => run_plot(args),
    }
}

fn parse_rat(s: &str) -> Result<Rat, Failure> {
    Rat::from_str(s).map_err(Failure::from)
}

fn parse_point(s: &str) -> Result<Point, Failure> {
    let (r, s) = s.split_once(',').ok_or_else(|| Failure {
        message: format!("expected `r,s`, got `{s}`"),
    })?;
    Ok(Point::new(parse_rat(r)?, parse_rat(s)?))
}

fn parse_pair(s: &str) -> Result<(Rat, Rat), Failure> {
    let p = parse_point(s)?;
    Ok((p.r, p.s))
}

fn parse_rat_list(s: &str) -> Result<Vec<Rat>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_rat)
        .collect()
}

fn parse_int_list(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(Failure::from))
        .collect()
}

fn parse_pairs(s: &str) -> Result<Vec<(i64, i64)>, Failure> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (m, n) = t.split_once(':').ok_or_else(|| Failure {
                message: format!("expected `m:n`, got `{t}`"),
            })?;
            Ok((m.trim().parse::<i64>()?, n.trim().parse::<i64>()?))
        })
        .collect()
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
    })
}

fn emit<T: Serialize>(cli: &Cli, report: &Report<T>, human: String) {
    if cli.json {
        println!("{}", report.to_json());
    } else {
        println!("{human}");
    }
}

fn run_shape(cli: &Cli, args: &ShapeArgs) -> Run {
    let domain: ToricDomain = load_json(&args.domain)?;
    let region = ShapeRegion::try_from(&domain)?;
    let point = parse_point(&args.point)?;
    let member = shape_member(&region, &point)?;
    let report = Report::new(
        json!({ "member": member }),
        json!({ "domain": domain, "point": point }),
    );
    emit(cli, &report, format!("member: {member}"));
    Ok(0)
}

fn run_knotted(cli: &Cli, args: &KnottedArgs) -> Run {
    let domain: ToricDomain = load_json(&args.domain)?;
    let region = ShapeRegion::try_from(&domain)?;

    if let Some(x) = &args.threshold {
        let x = parse_rat(x)?;
        let family = match &region {
            ShapeRegion::Ball { .. } => ThresholdFamily::Ball,
            ShapeRegion::Ellipsoid { k, .. } => ThresholdFamily::Ellipsoid {
                k: u64::try_from(k).map_err(|_| Failure {
                    message: "ratio too large".into(),
                })?,
            },
            ShapeRegion::Polydisk { c, d } => ThresholdFamily::Polydisk { k: d / c },
        };
        let bound = unknotted_threshold(&family, &x)?;
        let report = Report::new(
            json!({ "threshold": bound }),
            json!({ "domain": domain, "x": x }),
        );
        emit(cli, &report, format!("threshold: {bound}"));
        return Ok(0);
    }

    let point = parse_point(args.point.as_deref().ok_or_else(|| Failure {
        message: "--point is required unless --threshold is given".into(),
    })?)?;
    let member = match &args.via_embedding {
        Some(x) => emb_knotted_member(&region, &parse_rat(x)?, &point)?,
        None => knotted_member(&region, &point)?,
    };
    let report = Report::new(
        json!({ "member": member }),
        json!({ "domain": domain, "point": point, "via_embedding": args.via_embedding }),
    );
    emit(cli, &report, format!("member: {member}"));
    Ok(0)
}

fn run_lift(cli: &Cli, args: &LiftArgs) -> Run {
    let domain: ToricDomain = load_json(&args.domain)?;
    let path: PolyPath = load_json(&args.path)?;
    let verdict = match &args.breakpoints {
        Some(list) => {
            let cuts = parse_rat_list(list)?;
            match general_criterion(&domain, &path, Some(&cuts))? {
                Some(certificate) => LiftVerdict::Lifts { certificate },
                None => LiftVerdict::Undetermined,
            }
        }
        None => classify(&domain, &path)?,
    };
    if let Some(out) = &args.svg {
        write_lift_svg(&domain, &path, out)?;
    }
    let code = match &verdict {
        LiftVerdict::Undetermined => 2,
        _ => 0,
    };
    let human = match &verdict {
        LiftVerdict::Lifts { .. } => "verdict: lifts",
        LiftVerdict::Obstructed { .. } => "verdict: obstructed",
        LiftVerdict::Undetermined => "verdict: undetermined",
    };
    let report = Report::new(verdict.clone(), json!({ "domain": domain, "path": path }));
    emit(cli, &report, human.to_string());
    Ok(code)
}

fn run_capacity(cli: &Cli, args: &CapacityArgs) -> Run {
    let a = parse_rat(&args.a)?;
    let b = parse_rat(&args.b)?;
    match args.index {
        Some(k) => {
            let value = ech_capacity(&a, &b, k)?;
            let report = Report::new(
                json!({ "index": k, "value": value }),
                json!({ "a": a, "b": b }),
            );
            emit(cli, &report, format!("c_{k} = {value}"));
        }
        None => {
            let seq = cap_sequence(&a, &b, args.count)?;
            let human = seq
                .entries
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let report = Report::new(
                json!({ "entries": seq.entries }),
                json!({ "a": a, "b": b, "count": args.count }),
            );
            emit(cli, &report, human);
        }
    }
    Ok(0)
}

fn run_lattice(cli: &Cli, args: &LatticeArgs) -> Run {
    let a = parse_rat(&args.a)?;
    let b = parse_rat(&args.b)?;
    let t = parse_rat(&args.t)?;
    let mode = match args.mode {
        ModeArg::RowSum => CountMode::RowSum,
        ModeArg::Brute => CountMode::BruteForce,
    };
    let count = lattice_count(&a, &b, &t, mode)?;
    let report = Report::new(
        json!({ "count": count }),
        json!({ "a": a, "b": b, "t": t, "mode": mode }),
    );
    emit(cli, &report, format!("count: {count}"));
    Ok(0)
}

fn run_embed(cli: &Cli, args: &EmbedArgs) -> Run {
    let (c, d) = parse_pair(&args.from)?;
    let (a, b) = parse_pair(&args.into)?;
    let outcome = shapelift_core::echlattice::embedding_check(&c, &d, &a, &b, args.horizon)?;
    let human = match &outcome {
        EmbedOutcome::NoObstructionUpTo { horizon } => {
            format!("no obstruction up to index {horizon} (not an existence proof)")
        }
        EmbedOutcome::ObstructedAt {
            index,
            source_entry,
            target_entry,
        } => {
            format!("obstructed at index {index}: {source_entry} > {target_entry}")
        }
        EmbedOutcome::ObstructedByVolume {
            source_volume,
            target_volume,
        } => {
            format!("obstructed by volume: {source_volume} > {target_volume}")
        }
    };
    let report = Report::new(
        outcome,
        json!({ "from": [c, d], "into": [a, b], "horizon": args.horizon }),
    );
    emit(cli, &report, human);
    Ok(0)
}

fn run_obstruct(cli: &Cli, args: &ObstructArgs) -> Run {
    let source: ToricDomain = load_json(&args.source)?;
    let target: ToricDomain = load_json(&args.target)?;
    let inst = ObstructionInstance::new(source, &target)?;
    let witness: Option<Witness> = match &args.witness {
        Some(path) => Some(load_json(path)?),
        None => None,
    };
    let conclusion = conclude(&inst, witness.as_ref(), args.search)?;
    if let Some(out) = &args.svg {
        write_obstruct_svg(&inst, &conclusion, out)?;
    }
    let (human, code) = match &conclusion {
        Conclusion::Obstructed { .. } => ("conclusion: obstructed (no embedding exists)", 0),
        Conclusion::Inconclusive => ("conclusion: inconclusive", 2),
    };
    let report = Report::new(
        conclusion.clone(),
        json!({
            "source": inst.source,
            "target": { "a": inst.target_a, "b": inst.target_b },
            "search": args.search,
        }),
    );
    emit(cli, &report, human.to_string());
    Ok(code)
}

fn run_sft(cli: &Cli, args: &SftCommand) -> Run {
    match args {
        SftCommand::Index(a) => {
            let pos = parse_rat_list(&a.pos)?;
            let index = match a.c1 {
                Some(c1) => {
                    let neg_terms = parse_rat_list(&a.neg_terms)?;
                    index_general(&pos, c1, &neg_terms)
                }
                None => {
                    let pairs = parse_pairs(&a.neg)?;
                    index_torus_ends(&pos, &pairs)
                }
            };
            let report = Report::new(
                json!({ "index": index }),
                json!({ "pos": a.pos, "neg": a.neg, "c1": a.c1, "neg_terms": a.neg_terms }),
            );
            emit(cli, &report, format!("index: {index}"));
        }
        SftCommand::Bidegree(a) => {
            let pairs = parse_pairs(&a.neg)?;
            let index = index_bidegree(&pairs, a.d1, a.d2);
            let report = Report::new(
                json!({ "index": index }),
                json!({ "neg": a.neg, "d1": a.d1, "d2": a.d2 }),
            );
            emit(cli, &report, format!("index: {index}"));
        }
        SftCommand::Building(a) => {
            let building = BuildingData {
                component_indices: parse_int_list(&a.indices)?,
                matched_leaf_dims: parse_int_list(&a.dims)?,
                component_areas: parse_rat_list(&a.areas)?,
                tree: vec![],
            };
            let (area, index) = building_totals(&building)?;
            let report = Report::new(
                json!({ "area": area, "index": index }),
                json!({ "indices": a.indices, "dims": a.dims, "areas": a.areas }),
            );
            emit(cli, &report, format!("area: {area}, index: {index}"));
        }
    }
    Ok(0)
}

fn run_verify(cli: &Cli) -> Run {
    let threads = std::env::var("SHAPELIFT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    let outcomes = run_suite(threads);
    let all_pass = outcomes.iter().all(|o| o.pass);
    if cli.json {
        let report = Report::new(&outcomes, json!({ "threads": threads }));
        println!("{}", report.to_json());
    } else {
        for o in &outcomes {
            println!(
                "{} {:<28} {}",
                if o.pass { "PASS" } else { "FAIL" },
                o.name,
                o.detail
            );
        }
    }
    if all_pass {
        Ok(0)
    } else {
        Err(Failure {
            message: "verification suite reported failures".into(),
        })
    }
}

fn family_line_forms(domain: &ToricDomain) -> Option<(Vec<LinearForm>, Vec<LinearForm>)> {
    // (flexible region forms, knotted region forms), each as `form <= 0`
    // conjunctions against the drawing box.
    let region = ShapeRegion::try_from(domain).ok()?;
    let (alpha, beta, threshold, cap_coeff, cap) = match &region {
        ShapeRegion::Ball { capacity } => (
            Rat::int(2),
            Rat::one(),
            capacity.clone(),
            Rat::int(3),
            capacity.clone(),
        ),
        ShapeRegion::Ellipsoid { a, b, k } => (
            Rat::from_bigint(k.clone()) + Rat::one(),
            Rat::one(),
            b.clone(),
            Rat::int(2),
            a.clone(),
        ),
        ShapeRegion::Polydisk { c, d } => {
            (Rat::one(), Rat::one(), d.clone(), Rat::int(2), c.clone())
        }
    };
    let reduced = LinearForm::new(Rat::one(), Rat::int(-1), Rat::zero());
    let flexible = vec![
        LinearForm::new(alpha.clone(), beta.clone(), -&threshold),
        reduced.clone(),
    ];
    let mut knotted = vec![
        // Above the obstructing line, below the r cap, inside the image.
        LinearForm::new(-&alpha, -&beta, threshold.clone()),
        LinearForm::new(cap_coeff, Rat::zero(), -&cap),
        reduced,
    ];
    if let Some(forms) = domain.interior_forms() {
        knotted.extend(forms);
    }
    Some((flexible, knotted))
}

fn write_lift_svg(domain: &ToricDomain, path: &PolyPath, out: &Path) -> Result<(), Failure> {
    let profile = domain.boundary_profile();
    let mut max_r = profile.last().expect("nonempty").r.clone();
    let mut max_s = profile[0].s.clone();
    for p in path.vertices() {
        if p.r > max_r {
            max_r = p.r.clone();
        }
        if p.s > max_s {
            max_s = p.s.clone();
        }
    }
    let mut regions = Vec::new();
    if let Some((flexible, knotted)) = family_line_forms(domain) {
        regions.push(TaggedRegion {
            label: "flexible region".into(),
            color: "#2e8b57",
            vertices: clipped_region(&max_r, &max_s, &flexible),
        });
        regions.push(TaggedRegion {
            label: "knotted region".into(),
            color: "#4169e1",
            vertices: clipped_region(&max_r, &max_s, &knotted),
        });
    }
    let scene = Scene {
        domain: domain.clone(),
        regions,
        paths: vec![LabeledPath {
            label: "path".into(),
            color: "#c00000",
            path: path.clone(),
        }],
    };
    fs::write(out, svg::render(&scene)).map_err(|e| Failure {
        message: format!("{}: {e}", out.display()),
    })?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn write_obstruct_svg(
    inst: &ObstructionInstance,
    conclusion: &Conclusion,
    out: &Path,
) -> Result<(), Failure> {
    let k = Rat::from_bigint(inst.ratio());
    let kp1 = &k + &Rat::one();
    let profile = inst.source.boundary_profile();
    let mut max_r = profile
        .last()
        .expect("nonempty")
        .r
        .clone()
        .max(inst.target_a.clone());
    let mut max_s = profile[0].s.clone().max(inst.target_b.clone());
    if let Conclusion::Obstructed { witness } = conclusion {
        for p in witness.path.vertices() {
            if p.r > max_r {
                max_r = p.r.clone();
            }
            if p.s > max_s {
                max_s = p.s.clone();
            }
        }
    }

    let mut regions = vec![
        TaggedRegion {
            label: "target image".into(),
            color: "#808080",
            vertices: vec![
                Point::new(Rat::zero(), Rat::zero()),
                Point::new(inst.target_a.clone(), Rat::zero()),
                Point::new(Rat::zero(), inst.target_b.clone()),
            ],
        },
        TaggedRegion {
            label: "excluded region".into(),
            color: "#ffa500",
            vertices: clipped_region(
                &max_r,
                &max_s,
                &[LinearForm::new(-&kp1, Rat::int(-1), inst.target_b.clone())],
            ),
        },
    ];
    let mut paths = Vec::new();
    if let Conclusion::Obstructed { witness } = conclusion {
        regions.push(TaggedRegion {
            label: "inner ellipsoid".into(),
            color: "#4169e1",
            vertices: vec![
                Point::new(Rat::zero(), Rat::zero()),
                Point::new(witness.inner.0.clone(), Rat::zero()),
                Point::new(Rat::zero(), witness.inner.1.clone()),
            ],
        });
        paths.push(LabeledPath {
            label: "witness path".into(),
            color: "#c00000",
            path: witness.path.clone(),
        });
    }
    let scene = Scene {
        domain: inst.source.clone(),
        regions,
        paths,
    };
    fs::write(out, svg::render(&scene)).map_err(|e| Failure {
        message: format!("{}: {e}", out.display()),
    })?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn run_plot(args: &PlotArgs) -> Run {
    let domain: ToricDomain = load_json(&args.domain)?;
    let profile = domain.boundary_profile();
    let mut max_r = profile.last().expect("nonempty").r.clone();
    let mut max_s = profile[0].s.clone();

    let path: Option<PolyPath> = match &args.path {
        Some(p) => Some(load_json(p)?),
        None => None,
    };
    if let Some(p) = &path {
        for v in p.vertices() {
            if v.r > max_r {
                max_r = v.r.clone();
            }
            if v.s > max_s {
                max_s = v.s.clone();
            }
        }
    }

    let mut regions = Vec::new();
    for shade in &args.shade {
        let forms = family_line_forms(&domain);
        match (shade.as_str(), forms) {
            ("flexible", Some((flexible, _))) => regions.push(TaggedRegion {
                label: "flexible region".into(),
                color: "#2e8b57",
                vertices: clipped_region(&max_r, &max_s, &flexible),
            }),
            ("knotted", Some((_, knotted))) => regions.push(TaggedRegion {
                label: "knotted region".into(),
                color: "#4169e1",
                vertices: clipped_region(&max_r, &max_s, &knotted),
            }),
            (other, _) => {
                return Err(Failure {
                    message: format!("unknown or unsupported shading `{other}` for this domain"),
                })
            }
        }
    }

    let paths = path
        .map(|p| {
            vec![LabeledPath {
                label: "path".into(),
                color: "#c00000",
                path: p,
            }]
        })
        .unwrap_or_default();
    let scene = Scene {
        domain,
        regions,
        paths,
    };
    fs::write(&args.svg, svg::render(&scene)).map_err(|e| Failure {
        message: format!("{}: {e}", args.svg.display()),
    })?;
    eprintln!("wrote {}", args.svg.display());
    Ok(0)
}
