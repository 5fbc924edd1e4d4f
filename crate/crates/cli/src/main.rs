//! `ruledgeo` command-line front end.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ruledgeo::offsets::{OffsetKind, OffsetSpec};
use ruledgeo::workbench::{self, ReportFile, BUILTINS, DEFAULT_SAMPLES};
use ruledgeo::{classify, ruled_apparatus, Expr, Tolerances};

#[derive(Parser, Debug)]
#[command(name = "ruledgeo", version, about = "Classify, synthesize and export ruled surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a surface and report its invariants.
    Classify(ClassifyArgs),
    /// Synthesize a surface from prescribed curvatures.
    Generate(GenerateArgs),
    /// Write a Wavefront OBJ mesh of a surface.
    Export(ExportArgs),
    /// Build a Bertrand or Mannheim offset.
    Offset(OffsetArgs),
    /// List builtin surfaces or write one out.
    Builtin(BuiltinArgs),
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// Surface JSON, sample CSV or `builtin:NAME`.
    #[arg(long)]
    input: String,
    #[arg(long, default_value = "1e-3", value_parser = number)]
    tol_ratio: f64,
    #[arg(long, default_value = "1e-3", value_parser = number)]
    tol_sigma: f64,
    #[arg(long, default_value = "1e-6", value_parser = number)]
    tol_det: f64,
    /// Arc-length sample count; defaults to the input's own.
    #[arg(long)]
    samples: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print a text summary.
    #[arg(long)]
    text: bool,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "theta",
        conflicts_with = "theta"
    )]
    k1: Option<String>,
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "theta",
        conflicts_with = "theta"
    )]
    k2: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "0", conflicts_with = "theta")]
    phi: String,
    /// Build the h-slant surface with k1 = 1 and axis angle THETA instead.
    #[arg(long, allow_hyphen_values = true, value_parser = number)]
    theta: Option<f64>,
    /// Arc-length range `A:B`.
    #[arg(long, allow_hyphen_values = true, value_parser = range)]
    range: (f64, f64),
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long)]
    input: String,
    /// Ruling parameter range `A:B`.
    #[arg(long, allow_hyphen_values = true, value_parser = range)]
    v_range: (f64, f64),
    #[arg(long, default_value_t = 128)]
    nu: usize,
    #[arg(long, default_value_t = 16)]
    nv: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Bertrand,
    Mannheim,
}

#[derive(Args, Debug)]
struct OffsetArgs {
    #[arg(long)]
    input: String,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Director rotation angle (Bertrand).
    #[arg(long, allow_hyphen_values = true, default_value = "0", value_parser = number)]
    alpha: f64,
    /// Striction-line displacement.
    #[arg(long, allow_hyphen_values = true, default_value = "1", value_parser = number)]
    dist: f64,
    /// Initial director phase (Mannheim).
    #[arg(long, allow_hyphen_values = true, default_value = "0", value_parser = number)]
    beta0: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("what").required(true).args(["list", "name"]))]
struct BuiltinArgs {
    #[arg(long)]
    list: bool,
    #[arg(long, requires = "out")]
    name: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A number, written as a constant expression such as `1e-3` or `pi/4`.
fn number(text: &str) -> Result<f64, String> {
    let e = Expr::parse(text).map_err(|e| e.to_string())?;
    if !e.is_constant() {
        return Err(format!("'{text}' is not a constant"));
    }
    let v = e.eval(0.0).map_err(|e| e.to_string())?;
    if !v.is_finite() {
        return Err(format!("'{text}' is not finite"));
    }
    Ok(v)
}

fn range(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("range '{text}' must look like A:B"))?;
    Ok((number(a)?, number(b)?))
}

fn parse_expr(text: &str) -> Result<Expr> {
    Expr::parse(text).with_context(|| format!("cannot parse expression '{text}'"))
}

fn run_classify(args: ClassifyArgs) -> Result<()> {
    let input = workbench::resolve_input(&args.input)?;
    let spec = match args.samples {
        Some(n) => input.spec.with_samples(n)?,
        None => input.spec,
    };
    let tol = Tolerances {
        ratio: args.tol_ratio,
        sigma: args.tol_sigma,
        det: args.tol_det,
        ..Tolerances::default()
    };
    let report = classify(&spec, &tol)?;
    if args.text {
        print!("{}", report.to_text());
    }
    let file = ReportFile::new(report, &input.source, &input.sha256);
    let json = file.to_json()?;
    match &args.report {
        Some(path) => fs::write(path, json).with_context(|| format!("cannot write {}", path.display()))?,
        None if !args.text => print!("{json}"),
        None => {}
    }
    Ok(())
}

fn run_generate(args: GenerateArgs) -> Result<()> {
    let spec = match args.theta {
        Some(theta) => workbench::from_theta(theta, args.range, args.samples)?,
        None => {
            let (Some(k1), Some(k2)) = (&args.k1, &args.k2) else {
                bail!("--k1 and --k2 are required without --theta");
            };
            workbench::from_curvatures(
                &parse_expr(k1)?,
                &parse_expr(k2)?,
                &parse_expr(&args.phi)?,
                args.range,
                args.samples,
            )?
        }
    };
    report_written(workbench::write_surface_outputs(&spec, &args.out)?);
    Ok(())
}

fn run_export(args: ExportArgs) -> Result<()> {
    let input = workbench::resolve_input(&args.input)?;
    workbench::write_obj(&input.spec, args.v_range, args.nu, args.nv, &args.out)?;
    report_written(vec![args.out]);
    Ok(())
}

fn run_offset(args: OffsetArgs) -> Result<()> {
    let input = workbench::resolve_input(&args.input)?;
    let ff = ruled_apparatus(&input.spec)?;
    let kind = match args.kind {
        Kind::Bertrand => OffsetKind::Bertrand,
        Kind::Mannheim => OffsetKind::Mannheim,
    };
    let offset = OffsetSpec {
        kind,
        alpha: args.alpha,
        r: args.dist,
        beta0: args.beta0,
    }
    .apply(&ff)?;
    report_written(workbench::write_surface_outputs(&offset, &args.out)?);
    Ok(())
}

fn run_builtin(args: BuiltinArgs) -> Result<()> {
    if args.list {
        for name in BUILTINS {
            println!("{name}");
        }
        return Ok(());
    }
    let (Some(name), Some(out)) = (args.name, args.out) else {
        bail!("--name requires --out");
    };
    let file = workbench::builtin_file(&name)?;
    let text = serde_json::to_string_pretty(&file)? + "\n";
    fs::write(&out, text).with_context(|| format!("cannot write {}", out.display()))?;
    report_written(vec![out]);
    Ok(())
}

fn report_written(paths: Vec<PathBuf>) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<ruledgeo::Error>() {
        Some(e) if e.is_geometric() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors, not geometric ones
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Classify(a) => run_classify(a),
        Command::Generate(a) => run_generate(a),
        Command::Export(a) => run_export(a),
        Command::Offset(a) => run_offset(a),
        Command::Builtin(a) => run_builtin(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
