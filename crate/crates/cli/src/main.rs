use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use torus_rigidity::counts::{synthesize_constructive_gains, Gates};
use torus_rigidity::document::{self, OrbitGraphDocument, ParseOptions};
use torus_rigidity::graph::periodic_equivalent;
use torus_rigidity::report::{analyze, AnalyzeOptions};
use torus_rigidity::rigidity::{flex_basis, Arithmetic};
use torus_rigidity::svg::{render_svg, SvgOptions};
use torus_rigidity::tgain::{apply_potentials, shifted_positions, t_potentials};

const RIGID: u8 = 0;
const FLEXIBLE: u8 = 1;
const INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "torus-rigidity", version, about = "Infinitesimal rigidity of periodic frameworks on a fixed torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, flexes, stresses and counting conditions. Exits 0 when rigid, 1 when flexible.
    Analyze(AnalyzeArgs),
    /// Re-gauge gains so that a spanning tree carries zero gain.
    Tgain(TgainArgs),
    /// Draw the framework, or a window of its periodic cover, as SVG.
    Svg(SvgArgs),
    /// Assign constructive gains from a decomposition into spanning trees.
    GenGains(GenGainsArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Random position samples for the generic rank.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Floating-point ranks; also accepts decimal coordinates.
    #[arg(long)]
    float: bool,
    /// Accept positions that coincide modulo the lattice.
    #[arg(long)]
    allow_degenerate: bool,
    /// Brute-force limits for the counting checks, as `V,E`.
    #[arg(long, value_name = "V,E", value_parser = parse_gates, default_value = "12,20")]
    gates: Gates,
    /// Print `key=value` lines instead of the text report.
    #[arg(long)]
    kv: bool,
    /// Include per-stage timings.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct TgainArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 0)]
    root: usize,
    /// Spanning tree as comma-separated edge indices; defaults to a breadth-first tree.
    #[arg(long, value_delimiter = ',')]
    tree: Option<Vec<usize>>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SvgArgs {
    file: PathBuf,
    /// Cell range `lo..hi`, once per axis or once for all axes.
    #[arg(long, value_name = "LO..HI", allow_hyphen_values = true, value_parser = parse_range)]
    window: Vec<(i64, i64)>,
    /// Overlay the first nontrivial flex, if any.
    #[arg(long)]
    flex_overlay: bool,
    /// Draw higher-dimensional frameworks by their first two coordinates.
    #[arg(long)]
    project: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenGainsArgs {
    file: PathBuf,
    /// Target dimension; defaults to the document's.
    #[arg(long, short = 'd', value_parser = clap::value_parser!(u32).range(1..))]
    dim: Option<u32>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_gates(s: &str) -> Result<Gates, String> {
    let (v, e) = s.split_once(',').ok_or("expected V,E")?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|err| format!("{x:?}: {err}"));
    Ok(Gates {
        max_vertices: num(v)?,
        max_edges: num(e)?,
    })
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let num = |x: &str| x.trim().parse::<i64>().map_err(|err| format!("{x:?}: {err}"));
    let (lo, hi) = (num(lo)?, num(hi)?);
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// An error with its exit code.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(INPUT_ERROR, e.to_string())
    }
}

fn read_document(path: &Path, options: ParseOptions) -> Result<OrbitGraphDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(INPUT_ERROR, format!("{}: {e}", path.display())))?;
    document::parse_with(&text, options).map_err(|e| Failure(INPUT_ERROR, format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure(INPUT_ERROR, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_analyze(args: &AnalyzeArgs) -> Result<u8, Failure> {
    let doc = read_document(&args.file, ParseOptions { allow_decimals: args.float })?;
    let options = AnalyzeOptions {
        trials: args.trials,
        seed: args.seed,
        arithmetic: if args.float { Arithmetic::Float } else { Arithmetic::Exact },
        allow_degenerate: args.allow_degenerate,
        gates: args.gates,
    };
    let report = analyze(&doc, &options)?;
    if args.kv {
        print!("{}", report.to_kv(args.timing));
    } else {
        print!("{}", report.to_text(args.timing));
    }
    Ok(if report.rigid { RIGID } else { FLEXIBLE })
}

fn run_tgain(args: &TgainArgs) -> Result<u8, Failure> {
    let doc = read_document(&args.file, ParseOptions::default())?;
    let graph = doc.graph()?;
    let tree = match &args.tree {
        Some(t) => t.clone(),
        None => graph.spanning_tree()?,
    };
    let pot = t_potentials(&graph, &tree, args.root)?;
    let relabelled = apply_potentials(&graph, &pot);
    if !periodic_equivalent(&graph, &relabelled)?.is_equivalent() {
        return Err(Failure(FLEXIBLE, "relabelled graph is not periodically equivalent to the input".into()));
    }

    let mut out = String::new();
    let tree_list = tree.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    let _ = writeln!(out, "# tree {tree_list}, root {}", args.root);
    for (v, z) in pot.potential.iter().enumerate() {
        let _ = writeln!(out, "# potential {v} {z}");
    }
    let mut result = OrbitGraphDocument::from_graph(&relabelled);
    result.name = doc.name.clone();
    result.comment = doc.comment.clone();
    result.lattice = doc.lattice.clone();
    if let Some(p) = &doc.positions {
        result.positions = Some(shifted_positions(p, &pot, doc.torus()?.lattice())?);
    }
    out.push_str(&document::write(&result));
    emit(args.output.as_deref(), &out)?;
    Ok(RIGID)
}

fn run_svg(args: &SvgArgs) -> Result<u8, Failure> {
    let mut doc = read_document(&args.file, ParseOptions::default())?;
    if doc.vertex_count == 0 {
        doc.positions.get_or_insert_with(Vec::new);
    }
    let framework = doc
        .framework(true)?
        .ok_or_else(|| Failure(INPUT_ERROR, "drawing needs vertex positions".into()))?;
    let d = framework.dim();
    let window = match args.window.len() {
        0 => None,
        1 => Some((vec![args.window[0].0; d], vec![args.window[0].1; d])),
        n if n == d => Some(args.window.iter().copied().unzip()),
        n => return Err(Failure(INPUT_ERROR, format!("{n} window ranges for dimension {d}"))),
    };
    let flex = if args.flex_overlay {
        let basis = flex_basis(&framework)?;
        if basis.vectors.is_empty() {
            eprintln!("warning: no nontrivial flex to overlay");
        }
        basis.vectors.into_iter().next()
    } else {
        None
    };
    if d > 2 && args.project {
        eprintln!("warning: drawing the first two of {d} coordinates");
    }
    let svg = render_svg(&framework, &SvgOptions { window, flex, project: args.project })?;
    emit(args.output.as_deref(), &svg)?;
    Ok(RIGID)
}

fn run_gen_gains(args: &GenGainsArgs) -> Result<u8, Failure> {
    let doc = read_document(&args.file, ParseOptions::default())?;
    let graph = doc.graph()?;
    let d = args.dim.map_or(doc.dim, |d| d as usize);
    let synthesized = match synthesize_constructive_gains(&graph, d) {
        Ok(g) => g,
        Err(e) => return Err(Failure(FLEXIBLE, format!("no decomposition into {d} spanning trees: {e}"))),
    };
    let mut result = OrbitGraphDocument::from_graph(&synthesized);
    result.name = doc.name.clone();
    result.comment = doc.comment.clone();
    if d == doc.dim {
        result.lattice = doc.lattice.clone();
        result.positions = doc.positions.clone();
    }
    emit(args.output.as_deref(), &document::write(&result))?;
    Ok(RIGID)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Tgain(args) => run_tgain(args),
        Command::Svg(args) => run_svg(args),
        Command::GenGains(args) => run_gen_gains(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
