//! stackres: exact plane-curve singularities, their invariants, and their
//! stack-theoretic resolutions, from the command line.
//!
//! Exit codes: 0 when the requested work succeeded and every verification
//! passed, 1 when a verification failed, 2 on input errors.

mod figures;
mod input;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stackres::blowup::{multiweighted_blowup, weighted_blowup, Blowup, BlowupKind};
use stackres::charpoly::{characteristic_polyhedron, CharPolyhedron};
use stackres::poly::{radical, MPoly};
use stackres::resolve::{resolve, Mode, ResolutionTree, ResolveError, ResolveOptions, TREE_SCHEMA};
use std::path::{Path, PathBuf};
use std::{env, fs, process};

/// Relative output paths are resolved against this directory when it is set.
const OUTPUT_DIR_VAR: &str = "STACKRES_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "stackres",
    version,
    about = "Exact resolution of plane curve singularities by stack-theoretic weighted blow-ups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the order, characteristic polyhedron, and canonical center.
    Analyze(InputArgs),
    /// Perform one blow-up at the canonical center and print every chart.
    Blowup(StepArgs),
    /// Resolve the curve completely; optionally export the tree and figures.
    Resolve(ResolveArgs),
    /// Re-run the drop checks on a stored resolution tree.
    Verify {
        /// Tree JSON written by `resolve --emit-json`.
        json: PathBuf,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Coefficient field: Q, or a prime power such as F2, F3, F9.
    #[arg(long)]
    field: String,
    /// Polynomial text, e.g. "y^2 - x^3".
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Variable names in ring order (default: inferred from the text, sorted).
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Seed for randomized factoring; results never depend on it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct StepArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Blow-up flavor; auto refines exactly when a weight is divisible by p.
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
}

#[derive(Args)]
struct ResolveArgs {
    #[command(flatten)]
    step: StepArgs,
    /// Abort any branch needing more blow-ups than this (default: the
    /// initial order, which the descent argument guarantees is enough).
    #[arg(long)]
    step_limit: Option<u64>,
    /// Write the resolution tree JSON to this path.
    #[arg(long)]
    emit_json: Option<PathBuf>,
    /// Write per-node figures (SVG plus manifest.json) into this directory.
    #[arg(long)]
    emit_svg: Option<PathBuf>,
    /// Also write TikZ companions next to the SVG figures.
    #[arg(long)]
    tikz: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Auto,
    Weighted,
    Multiweighted,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::Weighted => Mode::Weighted,
            ModeArg::Multiweighted => Mode::MultiWeighted,
        }
    }
}

/// A failure with its process exit code: 1 for verification failures, 2 for
/// input errors.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn verification(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }
}

impl From<ResolveError> for Failure {
    fn from(e: ResolveError) -> Failure {
        match e {
            ResolveError::InvariantDidNotDrop { .. } | ResolveError::StepLimitExceeded { .. } => {
                Failure::verification(e.to_string())
            }
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::input(e.to_string())
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            process::exit(code);
        }
    };
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    process::exit(code);
}

fn dispatch(cli: &Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Analyze(args) => analyze_cmd(args),
        Command::Blowup(args) => blowup_cmd(args),
        Command::Resolve(args) => resolve_cmd(args),
        Command::Verify { json } => verify_cmd(json),
    }
}

fn parse_args(args: &InputArgs) -> Result<MPoly, Failure> {
    input::parse_input(&args.field, &args.poly, args.vars.as_deref()).map_err(Failure::input)
}

/// Reject mode/field combinations before doing any work.
fn check_mode(f: &MPoly, mode: ModeArg) -> Result<(), Failure> {
    if mode == ModeArg::Multiweighted && f.field().characteristic() == 0 {
        return Err(Failure::input(
            "the multi-weighted refinement exists for positive characteristic only",
        ));
    }
    Ok(())
}

fn print_header(f: &MPoly) {
    println!("field: {}", f.field().spec_string());
    println!("input: {f}");
    println!("order: {}", f.order().expect("nonzero input"));
}

fn print_analysis(f: &MPoly, cp: &CharPolyhedron) {
    println!("delta: {}", cp.delta);
    println!("invariant: ({}, {})", cp.center.invariant.0, cp.center.invariant.1);
    println!("center: z = {}, x = {}", cp.center.z_name, cp.center.x_name);
    println!(
        "weights: (w_z, w_x) = ({}, {}), level {}",
        cp.center.w_z, cp.center.w_x, cp.center.ell
    );
    let vars = f.vars();
    let mut prep = Vec::new();
    if !cp.frame.scale.is_one() {
        prep.push(format!("divide by {}", cp.frame.scale));
    }
    for step in &cp.frame.steps {
        let (z, x) = (&vars[cp.frame.z], &vars[cp.frame.x]);
        prep.push(format!("{z} -> {z} + ({})*{x}^{}", step.lambda, step.exponent));
    }
    if prep.is_empty() {
        println!("preparation: none");
    } else {
        println!("preparation:");
        for line in prep {
            println!("  {line}");
        }
    }
    println!("prepared: {}", cp.prepared);
}

fn analyze_cmd(args: &InputArgs) -> Result<i32, Failure> {
    let f = parse_args(args)?;
    print_header(&f);
    if radical(&f).order().expect("nonzero input") <= 1 {
        println!("the reduced curve is smooth at the origin; no center to compute");
        return Ok(0);
    }
    let cp = characteristic_polyhedron(&f).map_err(|e| Failure::input(e.to_string()))?;
    print_analysis(&f, &cp);
    Ok(0)
}

/// The driver's mode decision, reproduced for a single step.
fn build_blowup(f: &MPoly, cp: &CharPolyhedron, mode: ModeArg) -> Result<Blowup, Failure> {
    let weights = cp.center.weights_for(f.vars());
    let w = (weights[0], weights[1]);
    let p = f.field().characteristic();
    let wild = p > 0 && (w.0.is_multiple_of(p) || w.1.is_multiple_of(p));
    let multi = match mode {
        ModeArg::Auto => wild,
        ModeArg::Weighted => false,
        ModeArg::Multiweighted => true,
    };
    if multi {
        let first = if p > 0 && w.1.is_multiple_of(p) { w.1 } else { w.0 };
        if first < 2 {
            return Err(Failure::input(format!(
                "weights {w:?} admit no multi-weighted refinement (first weight is 1)"
            )));
        }
        Ok(multiweighted_blowup(&cp.prepared, w))
    } else {
        Ok(weighted_blowup(&cp.prepared, w))
    }
}

fn print_blowup(b: &Blowup) {
    match b.kind {
        BlowupKind::Weighted => println!("mode: weighted"),
        BlowupKind::MultiWeighted { kappa, swapped } => {
            println!("mode: multi-weighted");
            println!("kappa: {kappa}");
            if swapped {
                println!("slots swapped so the wild weight comes first");
            }
        }
    }
    println!("slots: ({}, {})", b.slot_vars.0, b.slot_vars.1);
    println!("slot weights: ({}, {})", b.weights.0, b.weights.1);
    let rays: Vec<String> =
        b.fan.rays().iter().map(|r| format!("({}, {})", r.0, r.1)).collect();
    println!("fan: {}", rays.join(" "));
    let dets: Vec<String> = b.fan.determinants().iter().map(u64::to_string).collect();
    println!("determinants: {}", dets.join(", "));
    println!("deligne-mumford: {}", b.is_dm);
    println!("alpha: {}", b.alpha);
    if let Some(beta) = b.beta {
        println!("beta: {beta}");
    }
    println!("proper transform: {}", b.proper);
    for chart in &b.charts {
        let etale = if chart.is_etale { "etale" } else { "NOT etale" };
        let owns = if chart.owns.is_empty() {
            "owns no divisor".to_string()
        } else {
            format!("owns {}", chart.owns.join(", "))
        };
        println!(
            "chart {} != 0: stabilizer mu_{}, {etale}, {owns}",
            chart.inverted.join(" "),
            chart.stabilizer
        );
        println!(
            "  slice ({}, {}): {}",
            chart.slice_vars[0], chart.slice_vars[1], chart.slice
        );
        let at_origin = chart.origin_value();
        let place = if at_origin.is_zero() { "on the curve" } else { "off the curve" };
        println!("  slice origin: {place}");
    }
}

fn blowup_cmd(args: &StepArgs) -> Result<i32, Failure> {
    let f = parse_args(&args.input)?;
    check_mode(&f, args.mode)?;
    print_header(&f);
    if radical(&f).order().expect("nonzero input") <= 1 {
        println!("the reduced curve is smooth at the origin; nothing to blow up");
        return Ok(0);
    }
    let cp = characteristic_polyhedron(&f).map_err(|e| Failure::input(e.to_string()))?;
    print_analysis(&f, &cp);
    let blowup = build_blowup(&f, &cp, args.mode)?;
    print_blowup(&blowup);
    Ok(0)
}

fn resolve_cmd(args: &ResolveArgs) -> Result<i32, Failure> {
    let f = parse_args(&args.step.input)?;
    check_mode(&f, args.step.mode)?;
    let opts = ResolveOptions {
        mode: args.step.mode.into(),
        step_limit: args.step_limit,
        seed: args.step.input.seed,
    };
    let tree = resolve(&f, &opts)?;
    println!("field: {}", tree.field);
    println!("input: {}", tree.input);
    println!("initial order: {}", tree.initial_order);
    println!("nodes: {}", tree.node_count());
    println!("blow-up depth: {}", tree.max_depth());
    let leaves = tree.unresolved_leaves();
    if leaves.is_empty() {
        println!("status: resolved");
    } else {
        println!("status: {} unresolved (non-rational) leaves", leaves.len());
    }
    if let Some(path) = &args.emit_json {
        let path = out_path(path);
        fs::write(&path, tree.to_json())?;
        println!("wrote tree to {}", path.display());
    }
    if let Some(dir) = &args.emit_svg {
        let dir = out_path(dir);
        let manifest = figures::emit_figures(&tree, &dir, args.tikz)?;
        println!("wrote {} figures to {}", manifest.len(), dir.display());
    }
    Ok(0)
}

fn verify_cmd(json: &Path) -> Result<i32, Failure> {
    let text = fs::read_to_string(json)?;
    let tree: ResolutionTree =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("bad tree JSON: {e}")))?;
    if tree.schema != TREE_SCHEMA {
        return Err(Failure::input(format!(
            "unsupported schema {:?}; this build reads {TREE_SCHEMA:?}",
            tree.schema
        )));
    }
    let report = verify::verify_tree(&tree);
    for line in &report.lines {
        println!("{line}");
    }
    let checks = report.lines.len();
    println!("verified: {checks} checks, {} failures", report.failures);
    Ok(if report.failures == 0 { 0 } else { 1 })
}

/// Resolve a relative output path against `STACKRES_OUTPUT_DIR` when set.
fn out_path(p: &Path) -> PathBuf {
    if p.is_absolute() {
        return p.to_path_buf();
    }
    match env::var(OUTPUT_DIR_VAR) {
        Ok(dir) if !dir.is_empty() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}
