//! Command-line front end: ingest arrangement documents and orbit
//! models, run classification and verification, emit diagrams and
//! reports.
//!
//! Exit status: 0 on success, 1 when a check fails, 2 on usage or parse
//! errors. Rationals cross this boundary as exact "p/q" strings.

use clap::{Parser, Subcommand, ValueEnum};
use isoparam::arrangement::Window;
use isoparam::dynkin::{self, DynkinDiagram, Symbol};
use isoparam::euclid_scan;
use isoparam::model::{
    nabla_tensor, reconstruct_gamma, verify_suite, CartanModel, GammaSystem, ModelKind,
};
use isoparam::report::{ArrangementDocument, ReportDocument};
use isoparam::scalar::{format_rat, parse_rat, Rat};
use isoparam::slices::{self, BlockQuery, NormalFamily};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "isoparam",
    version,
    about = "Exact affine root systems and homogeneous-structure verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an arrangement document against the diagram tables.
    Classify {
        /// Path to the arrangement JSON document ("-" for stdin).
        doc: String,
        /// Override the document's window radius.
        #[arg(long)]
        window_radius: Option<String>,
    },
    /// Check the axioms of the canonical root system of a document.
    Axioms {
        doc: String,
        #[arg(long)]
        window_radius: Option<String>,
    },
    /// Restrict the canonical system to the span of selected families
    /// at the document basepoint, validate and classify it.
    Restrict {
        doc: String,
        /// Comma-separated family labels whose directions span the
        /// target subspace.
        #[arg(long)]
        span: String,
    },
    /// Print the wall orbits of the Weyl group action.
    Orbits {
        doc: String,
        #[arg(long)]
        window_radius: Option<String>,
    },
    /// Allowed component set of the structure on an eigenspace pair.
    Support {
        /// Diagram symbol, e.g. "A~3", "C~2'", "(B~3,B~3v)".
        symbol: String,
        i: i64,
        j: i64,
        /// Treat E_{a,i} as reducible (Theorem-E style bounds).
        #[arg(long)]
        reducible: bool,
        /// Which sub-blocks of the arguments the query refers to.
        #[arg(long, value_enum, default_value_t = BlockArg::Full)]
        block: BlockArg,
    },
    /// Run the exact identity suite on an orbit model.
    Verify {
        /// Model name: a2, b2 or bc2.
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Exhaustive parallel-lines dichotomy scan over bounded grids.
    EuclidScan {
        #[arg(long, default_value_t = 6)]
        max_line: i64,
        #[arg(long, default_value_t = 4)]
        max_denom: i64,
        #[arg(long, value_enum, default_value_t = Lattice::Both)]
        lattice: Lattice,
    },
    /// Exact enclosure of the sum of inverse squared directed distances.
    NormalSum {
        #[arg(long)]
        d0: String,
        #[arg(long)]
        d: String,
        #[arg(long, default_value = "1/1000000")]
        precision: String,
    },
    /// Emit the Dynkin diagram of a document (DOT or text).
    Diagram {
        doc: String,
        #[arg(long)]
        window_radius: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BlockArg {
    Full,
    Primed,
    DoublePrimed,
    DoublePrimedLeft,
    DoublePrimedRight,
}

impl BlockArg {
    fn to_query(self) -> BlockQuery {
        match self {
            BlockArg::Full => BlockQuery::Full,
            BlockArg::Primed => BlockQuery::PrimedBoth,
            BlockArg::DoublePrimed => BlockQuery::DoublePrimedBoth,
            BlockArg::DoublePrimedLeft => BlockQuery::DoublePrimedLeft,
            BlockArg::DoublePrimedRight => BlockQuery::DoublePrimedRight,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Lattice {
    Planar,
    Hex,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_document(path: &str) -> Result<(ArrangementDocument, Vec<u8>), String> {
    let text = if path == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| e.to_string())?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?
    };
    let doc: ArrangementDocument = serde_json::from_str(&text)
        .map_err(|e| format!("{path}: line {} column {}: {e}", e.line(), e.column()))?;
    Ok((doc, text.into_bytes()))
}

/// Applies a `--window-radius` override; the value `auto` picks four
/// times the widest family step.
fn apply_radius(document: &mut ArrangementDocument, flag: Option<String>) -> Result<(), String> {
    let Some(flag) = flag else { return Ok(()) };
    if flag == "auto" {
        let arr = document.to_arrangement().map_err(|e| e.to_string())?;
        let widest = arr
            .families
            .iter()
            .map(|f| f.step().clone())
            .max()
            .ok_or("empty arrangement")?;
        document.window_radius = isoparam::scalar::format_rat(&(widest * isoparam::scalar::rat(4)));
    } else {
        document.window_radius = flag;
    }
    Ok(())
}

/// Canonical squared lengths per family: ||u||^2 / gap^2 over the union
/// of families sharing a direction; circled families are read as
/// carrying the doubled root, so their reduced-part length is a quarter
/// of the canonical one.
fn canonical_lengths(window: &Window) -> (Vec<Rat>, Vec<bool>) {
    let arr = &window.arrangement;
    let lengths = arr
        .families
        .iter()
        .map(|f| {
            let gap = arr
                .min_gap_in_direction(f.direction())
                .expect("direction present");
            let full = f.direction().norm2() / (&gap * &gap);
            if f.reducible {
                full / isoparam::scalar::rat(4)
            } else {
                full
            }
        })
        .collect();
    let circles = arr.families.iter().map(|f| f.reducible).collect();
    (lengths, circles)
}

fn classify_window(window: &Window) -> Result<DynkinDiagram, String> {
    if window.arrangement.rank() < 2 {
        return Err("rank-one arrangements are unsupported".into());
    }
    let (lengths, circles) = canonical_lengths(window);
    dynkin::dynkin(window, &lengths, &circles).map_err(|e| e.to_string())
}

fn emit(report: &ReportDocument, format: Format) {
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(report).expect("report serializes")
            );
        }
        _ => {
            println!("command: {}", report.command);
            println!("inputs-digest: {}", report.inputs_digest);
            if let Some(seed) = report.seed {
                println!("seed: {seed}");
            }
            for r in &report.results {
                println!(
                    "[{}] {}{}{}",
                    if r.pass { "pass" } else { "FAIL" },
                    r.name,
                    if r.exact { " (exact)" } else { "" },
                    r.detail
                        .as_ref()
                        .map(|d| format!(" {d}"))
                        .unwrap_or_default()
                );
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Classify { doc, window_radius } => {
            let (mut document, bytes) = read_document(&doc)?;
            apply_radius(&mut document, window_radius)?;
            let window = document.window().map_err(|e| e.to_string())?;
            let diagram = classify_window(&window)?;
            let orbits = dynkin::vertex_orbits(&diagram);
            let mut report = ReportDocument::new("classify", &bytes);
            report.push_detail(
                "symbol",
                true,
                true,
                serde_json::json!(diagram.symbol.to_string()),
            );
            report.push_detail("vertex-orbits", true, true, serde_json::json!(orbits.len()));
            match cli.format {
                Format::Dot => println!("{}", dynkin::to_dot(&diagram, &window.arrangement)),
                Format::Text => {
                    emit(&report, cli.format);
                    print!("{}", dynkin::to_text(&diagram, &window.arrangement));
                }
                Format::Json => emit(&report, cli.format),
            }
            Ok(true)
        }
        Command::Axioms { doc, window_radius } => {
            let (mut document, bytes) = read_document(&doc)?;
            apply_radius(&mut document, window_radius)?;
            let window = document.window().map_err(|e| e.to_string())?;
            let system = isoparam::root_system::AffineRootSystem::canonical(&window)
                .map_err(|e| e.to_string())?;
            let axioms = system.validate().map_err(|e| e.to_string())?;
            let mut report = ReportDocument::new("axioms", &bytes);
            for (name, outcome) in [
                ("gradient-normal", &axioms.gradient),
                ("integrality", &axioms.integrality),
                ("surjective-onto-hyperplanes", &axioms.surjective),
                ("reflection-invariant", &axioms.invariant),
            ] {
                match outcome {
                    Ok(()) => report.push(name, true, true),
                    Err(w) => report.push_detail(name, false, true, serde_json::json!(w)),
                }
            }
            emit(&report, cli.format);
            Ok(report.all_pass())
        }
        Command::Restrict { doc, span } => {
            let (document, bytes) = read_document(&doc)?;
            let window = document.window().map_err(|e| e.to_string())?;
            let basepoint = document.basepoint().map_err(|e| e.to_string())?;
            let labels: Vec<&str> = span.split(',').map(str::trim).collect();
            let mut dirs = Vec::new();
            for l in &labels {
                let f = window
                    .arrangement
                    .families
                    .iter()
                    .find(|f| f.label == *l)
                    .ok_or_else(|| format!("unknown family label {l}"))?;
                dirs.push(f.direction().clone());
            }
            let chart =
                isoparam::arrangement::Chart::new(basepoint, dirs).map_err(|e| e.to_string())?;
            let system = isoparam::root_system::AffineRootSystem::canonical(&window)
                .map_err(|e| e.to_string())?;
            let restricted = system.restrict(&chart).map_err(|e| e.to_string())?;
            let axioms = restricted.validate().map_err(|e| e.to_string())?;
            let diagram = classify_window(&restricted.window)?;
            let mut report = ReportDocument::new("restrict", &bytes);
            report.push("restricted-axioms", axioms.all_pass(), true);
            report.push_detail(
                "restricted-symbol",
                true,
                true,
                serde_json::json!(diagram.symbol.to_string()),
            );
            emit(&report, cli.format);
            Ok(report.all_pass())
        }
        Command::Orbits { doc, window_radius } => {
            let (mut document, bytes) = read_document(&doc)?;
            apply_radius(&mut document, window_radius)?;
            let window = document.window().map_err(|e| e.to_string())?;
            let diagram = classify_window(&window)?;
            let orbits = dynkin::vertex_orbits(&diagram);
            let mut report = ReportDocument::new("orbits", &bytes);
            report.push_detail(
                "vertex-orbit-count",
                true,
                true,
                serde_json::json!(orbits.len()),
            );
            for (i, class) in orbits.iter().enumerate() {
                let walls: Vec<String> = class
                    .iter()
                    .map(|&v| {
                        let w = &diagram.walls[v];
                        format!("{}[{}]", window.arrangement.families[w.family].label, w.k)
                    })
                    .collect();
                report.push_detail(format!("orbit-{i}"), true, true, serde_json::json!(walls));
            }
            emit(&report, cli.format);
            Ok(true)
        }
        Command::Support {
            symbol,
            i,
            j,
            reducible,
            block,
        } => {
            let sym = Symbol::parse(&symbol).ok_or_else(|| format!("unknown symbol {symbol}"))?;
            let support = slices::component_support(sym, i, j, reducible, block.to_query())
                .map_err(|e| e.to_string())?;
            let exceptions = slices::exception_set(i, j).map_err(|e| e.to_string())?;
            let mut report = ReportDocument::new("support", symbol.as_bytes());
            let terms: Vec<String> = support
                .terms
                .iter()
                .map(|t| {
                    format!(
                        "({}){}{}",
                        t.index,
                        match t.block {
                            slices::BlockTag::Full => "",
                            slices::BlockTag::Prime => "'",
                            slices::BlockTag::DoublePrime => "''",
                        },
                        if t.exceptional { " [exceptional]" } else { "" }
                    )
                })
                .collect();
            report.push_detail(
                "support",
                true,
                true,
                serde_json::json!({
                    "zero": support.zero,
                    "components": terms,
                }),
            );
            let exc: Vec<serde_json::Value> = exceptions
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "value": format_rat(&e.value),
                        "integral": e.integral,
                    })
                })
                .collect();
            report.push_detail("exception-set", true, true, serde_json::json!(exc));
            emit(&report, cli.format);
            Ok(true)
        }
        Command::Verify {
            model,
            trials,
            seed,
        } => {
            let kind = ModelKind::parse(&model).map_err(|e| e.to_string())?;
            let cartan = CartanModel::build(kind).map_err(|e| e.to_string())?;
            let system = GammaSystem::new(cartan).map_err(|e| e.to_string())?;
            let suite = verify_suite(&system, trials, seed).map_err(|e| e.to_string())?;
            let mut report = ReportDocument::new("verify", model.as_bytes()).with_seed(seed);
            report.push_detail(
                "suite",
                true,
                true,
                serde_json::json!({ "model": suite.model, "trials": suite.trials }),
            );
            for idr in &suite.identities {
                if idr.passed() {
                    report.push_detail(
                        idr.name,
                        true,
                        true,
                        serde_json::json!({ "checks": idr.checks }),
                    );
                } else {
                    report.push_detail(
                        idr.name,
                        false,
                        true,
                        serde_json::json!({
                            "checks": idr.checks,
                            "witnesses": idr.failures,
                        }),
                    );
                }
            }
            // Rigidity reconstruction as part of the full report.
            let tensor = nabla_tensor(&system).map_err(|e| e.to_string())?;
            let recon = reconstruct_gamma(&system, &tensor).map_err(|e| e.to_string())?;
            let mut matches = true;
            'outer: for u in 0..system.dim {
                let mut x = system.zero_vec();
                x[u] = isoparam::scalar::rat(1);
                for w in 0..system.dim {
                    let mut y = system.zero_vec();
                    y[w] = isoparam::scalar::rat(1);
                    if system.gamma(&x, &y).map_err(|e| e.to_string())? != recon[u][w] {
                        matches = false;
                        break 'outer;
                    }
                }
            }
            report.push("gamma-reconstruction", matches, true);
            emit(&report, cli.format);
            Ok(report.all_pass())
        }
        Command::EuclidScan {
            max_line,
            max_denom,
            lattice,
        } => {
            let mut report =
                ReportDocument::new("euclid-scan", format!("{max_line}:{max_denom}").as_bytes());
            let mut ok = true;
            let mut push = |name: &str, counts: &euclid_scan::ScanCounts, ok: &mut bool| {
                *ok &= counts.violations.is_empty();
                report.push_detail(
                    name,
                    counts.violations.is_empty(),
                    true,
                    serde_json::json!({
                        "checked": counts.checked,
                        "colinear": counts.colinear,
                        "midline_orthogonal": counts.midline_orthogonal,
                        "constraints_not_satisfied": counts.constraints_not_satisfied,
                        "violations": counts.violations,
                    }),
                );
            };
            if lattice != Lattice::Hex {
                push(
                    "planar-lattice",
                    &euclid_scan::planar_scan(max_line, max_denom),
                    &mut ok,
                );
            }
            if lattice != Lattice::Planar {
                push(
                    "hex-lattice",
                    &euclid_scan::hex_scan(max_line, max_denom),
                    &mut ok,
                );
            }
            emit(&report, cli.format);
            Ok(ok)
        }
        Command::NormalSum { d0, d, precision } => {
            let d0 = parse_rat(&d0).map_err(|e| e.to_string())?;
            let d = parse_rat(&d).map_err(|e| e.to_string())?;
            let precision = parse_rat(&precision).map_err(|e| e.to_string())?;
            let family =
                NormalFamily::new("family", isoparam::geometry::Vector::from_ints(&[1]), d0, d)
                    .map_err(|e| e.to_string())?;
            let (lo, hi) = slices::normal_sum(&family, &precision).map_err(|e| e.to_string())?;
            let mut report = ReportDocument::new("normal-sum", &[]);
            report.push_detail(
                "enclosure",
                true,
                true,
                serde_json::json!({
                    "lo": format_rat(&lo),
                    "hi": format_rat(&hi),
                    "lo_f64": isoparam::scalar::to_f64(&lo),
                    "hi_f64": isoparam::scalar::to_f64(&hi),
                }),
            );
            emit(&report, cli.format);
            Ok(true)
        }
        Command::Diagram { doc, window_radius } => {
            let (mut document, _) = read_document(&doc)?;
            apply_radius(&mut document, window_radius)?;
            let window = document.window().map_err(|e| e.to_string())?;
            let diagram = classify_window(&window)?;
            match cli.format {
                Format::Dot => println!("{}", dynkin::to_dot(&diagram, &window.arrangement)),
                _ => print!("{}", dynkin::to_text(&diagram, &window.arrangement)),
            }
            Ok(true)
        }
    }
}
