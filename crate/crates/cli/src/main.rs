//! Command-line front end for the Stokes solver suite.
//!
//! Four subcommands: `solve` writes one solution as plot-ready rows,
//! `converge` runs a grid-refinement study with fitted orders, `bench`
//! times all three methods across resolutions, and `checkerboard` contrasts
//! the collocated and staggered pressure parity metrics. All numeric output
//! carries 17 significant digits so files round-trip bit for bit; identical
//! flags produce identical files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use stokes2d_core::{
    checkerboard_metric, convergence_csv, convergence_json, fmt_f64, run_convergence,
    solution_csv, solution_json, solve_projection, solve_saddle_point, time_solver, timing_csv,
    timing_json, timing_ratios, DtPolicy, Error, GridMode, Method, PipeParams, Result, Scenario,
    VesicleParams, ViscosityField,
};

#[derive(Parser)]
#[command(
    name = "stokes2d",
    version,
    about = "2D incompressible Stokes flow: saddle-point, decoupling, and projection solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario at a single resolution and write the fields
    Solve(SolveArgs),
    /// Run a grid-refinement study and fit convergence orders
    Converge(ConvergeArgs),
    /// Time all three methods across resolutions and report cost ratios
    Bench(BenchArgs),
    /// Contrast collocated and staggered pressure parity on the pipe
    Checkerboard(CheckerboardArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioKind {
    Pipe,
    Vesicle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Scenario parameter overrides; unset values fall back to the canonical
/// parameter sets (pipe: p0=200, p1=100, mu=2 on the unit square; vesicle:
/// R=5, L=5, eps=R/2, mu=1 on a 20x20 box).
#[derive(Args)]
struct ScenarioOpts {
    /// Pipe inlet pressure
    #[arg(long)]
    p0: Option<f64>,
    /// Pipe outlet pressure
    #[arg(long)]
    p1: Option<f64>,
    /// Viscosity (pipe), or vesicle viscosity outside the membrane
    #[arg(long)]
    mu: Option<f64>,
    /// Vesicle membrane radius
    #[arg(long = "R")]
    r: Option<f64>,
    /// Vesicle margin between membrane and walls
    #[arg(long = "L")]
    l: Option<f64>,
    /// Half-width of the mollified membrane band
    #[arg(long)]
    eps: Option<f64>,
    /// Vesicle viscosity inside the membrane; makes the viscosity field
    /// spatially varying (projection method only)
    #[arg(long = "mu-inside")]
    mu_inside: Option<f64>,
}

#[derive(Args)]
struct OutputOpts {
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format for the primary document
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Reserved; every algorithm in the suite is deterministic
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SolveArgs {
    /// Solution method
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Problem to solve
    #[arg(long, value_enum)]
    scenario: ScenarioKind,
    /// Nodes per variable per direction
    #[arg(long = "M")]
    m: usize,
    /// Projection time steps (projection method only)
    #[arg(long)]
    steps: Option<usize>,
    /// Explicit time step overriding dt = dx^2 (projection method only)
    #[arg(long)]
    dt: Option<f64>,
    #[command(flatten)]
    params: ScenarioOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Solution method
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Problem to solve
    #[arg(long, value_enum)]
    scenario: ScenarioKind,
    /// Comma-separated resolutions, strictly increasing
    #[arg(long = "Ms", value_delimiter = ',')]
    ms: Vec<usize>,
    #[command(flatten)]
    params: ScenarioOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct BenchArgs {
    /// Problem to benchmark
    #[arg(long, value_enum, default_value_t = ScenarioKind::Vesicle)]
    scenario: ScenarioKind,
    /// Comma-separated resolutions
    #[arg(long = "Ms", value_delimiter = ',', default_values_t = [25, 50, 75, 100, 150, 200])]
    ms: Vec<usize>,
    /// Timed runs per (method, M) pair after one untimed warm-up
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[command(flatten)]
    params: ScenarioOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct CheckerboardArgs {
    /// Nodes per variable per direction
    #[arg(long = "M", default_value_t = 20)]
    m: usize,
    #[command(flatten)]
    params: ScenarioOpts,
    #[command(flatten)]
    output: OutputOpts,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version render in full
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // collapse clap's report (sans usage footer) onto one line
            let text = e.to_string();
            let message = text
                .lines()
                .take_while(|l| !l.trim_start().starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            eprintln!("{message}");
            return ExitCode::from(2);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Converge(args) => run_converge(args),
        Command::Bench(args) => run_bench(args),
        Command::Checkerboard(args) => run_checkerboard(args),
    }
}

fn run_solve(args: SolveArgs) -> Result<()> {
    let scenario = build_scenario(args.scenario, &args.params)?;
    let solution = match args.method {
        Method::Projection => solve_projection(
            &scenario,
            args.m,
            args.steps.unwrap_or(1),
            args.dt.map(DtPolicy::Explicit).unwrap_or(DtPolicy::DxSquared),
        )?,
        method => {
            if args.steps.is_some() || args.dt.is_some() {
                return Err(Error::UnsupportedCombination {
                    what: format!(
                        "--steps and --dt configure time stepping, which only the projection \
                         method has; the {} method solves the stationary system directly",
                        method.tag()
                    ),
                });
            }
            method.solve(&scenario, args.m)?
        }
    };
    let text = match args.output.format {
        Format::Csv => solution_csv(&solution),
        Format::Json => solution_json(&solution)?,
    };
    emit(args.output.out.as_deref(), &text)
}

fn run_converge(args: ConvergeArgs) -> Result<()> {
    let scenario = build_scenario(args.scenario, &args.params)?;
    let report = run_convergence(args.method, &scenario, &args.ms)?;
    match args.output.format {
        Format::Csv => {
            emit(args.output.out.as_deref(), &convergence_csv(&report))?;
            // fitted orders ride along in a JSON sidecar next to the CSV
            if let Some(sidecar) = sidecar_path(args.output.out.as_deref()) {
                std::fs::write(sidecar, with_newline(convergence_json(&report)?))?;
            }
            Ok(())
        }
        Format::Json => emit(args.output.out.as_deref(), &with_newline(convergence_json(&report)?)),
    }
}

fn run_bench(args: BenchArgs) -> Result<()> {
    let scenario = build_scenario(args.scenario, &args.params)?;
    // strictly sequential: one timed solve at a time
    let mut samples = Vec::with_capacity(args.ms.len() * Method::ALL.len());
    for &m in &args.ms {
        for method in Method::ALL {
            samples.push(time_solver(method, &scenario, m, args.repeats)?);
        }
    }
    let ratios = timing_ratios(&samples)?;
    match args.output.format {
        Format::Csv => {
            emit(args.output.out.as_deref(), &timing_csv(&samples))?;
            if let Some(sidecar) = sidecar_path(args.output.out.as_deref()) {
                std::fs::write(sidecar, with_newline(timing_json(&samples, &ratios)?))?;
            }
            Ok(())
        }
        Format::Json => {
            emit(args.output.out.as_deref(), &with_newline(timing_json(&samples, &ratios)?))
        }
    }
}

fn run_checkerboard(args: CheckerboardArgs) -> Result<()> {
    for (flag, value) in [("--R", args.params.r), ("--L", args.params.l), ("--eps", args.params.eps), ("--mu-inside", args.params.mu_inside)] {
        if value.is_some() {
            return Err(Error::UnsupportedCombination {
                what: format!("{flag} configures the vesicle scenario; the checkerboard demo runs on the pipe"),
            });
        }
    }
    let scenario = build_pipe(&args.params)?;
    let collocated = solve_saddle_point(&scenario, args.m, GridMode::Collocated)?;
    let staggered = solve_saddle_point(&scenario, args.m, GridMode::Staggered)?;
    let mc = checkerboard_metric(&collocated.p);
    let ms = checkerboard_metric(&staggered.p);
    let ratio = mc / ms;
    let text = match args.output.format {
        Format::Csv => format!(
            "layout,checkerboard_metric\ncollocated,{}\nstaggered,{}\n",
            fmt_f64(mc),
            fmt_f64(ms)
        ),
        Format::Json => with_newline(serde_json::to_string_pretty(&json!({
            "M": args.m,
            "collocated_metric": mc,
            "staggered_metric": ms,
            "contrast_ratio": if ratio.is_finite() { Some(ratio) } else { None },
        }))?),
    };
    emit(args.output.out.as_deref(), &text)
}

fn build_scenario(kind: ScenarioKind, opts: &ScenarioOpts) -> Result<Scenario> {
    match kind {
        ScenarioKind::Pipe => {
            for (flag, value) in [
                ("--R", opts.r),
                ("--L", opts.l),
                ("--eps", opts.eps),
                ("--mu-inside", opts.mu_inside),
            ] {
                if value.is_some() {
                    return Err(Error::UnsupportedCombination {
                        what: format!("{flag} configures the vesicle scenario, not the pipe"),
                    });
                }
            }
            build_pipe(opts)
        }
        ScenarioKind::Vesicle => {
            for (flag, value) in [("--p0", opts.p0), ("--p1", opts.p1)] {
                if value.is_some() {
                    return Err(Error::UnsupportedCombination {
                        what: format!("{flag} configures the pipe scenario, not the vesicle"),
                    });
                }
            }
            let r = opts.r.unwrap_or(5.0);
            let l = opts.l.unwrap_or(5.0);
            let eps = opts.eps.unwrap_or(r / 2.0);
            let mu_out = opts.mu.unwrap_or(1.0);
            let viscosity = match opts.mu_inside {
                None => ViscosityField::constant(mu_out)?,
                Some(mu_in) => two_phase_viscosity(r, l, eps, mu_in, mu_out)?,
            };
            Ok(Scenario::Vesicle(VesicleParams::new(r, l, eps, viscosity)?))
        }
    }
}

fn build_pipe(opts: &ScenarioOpts) -> Result<Scenario> {
    Ok(Scenario::Pipe(PipeParams::new(
        opts.p0.unwrap_or(200.0),
        opts.p1.unwrap_or(100.0),
        opts.mu.unwrap_or(2.0),
    )?))
}

/// Viscosity taking one value inside the membrane and another outside,
/// blended across the mollification band by the integrated delta profile
/// so the field stays smooth.
fn two_phase_viscosity(
    r: f64,
    l: f64,
    eps: f64,
    mu_in: f64,
    mu_out: f64,
) -> Result<ViscosityField> {
    for mu in [mu_in, mu_out] {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::NonPositiveConstantViscosity { mu });
        }
    }
    let center = l + r;
    Ok(ViscosityField::varying(move |x, y| {
        let z = (x - center).hypot(y - center) - r;
        let inside_fraction = if z <= -eps {
            1.0
        } else if z >= eps {
            0.0
        } else {
            1.0 - ((z + eps) / (2.0 * eps)
                + (std::f64::consts::PI * z / eps).sin() / (2.0 * std::f64::consts::PI))
        };
        mu_out + (mu_in - mu_out) * inside_fraction
    }))
}

fn with_newline(mut text: String) -> String {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Path for the JSON companion of a CSV file, or None when writing to
/// stdout or when it would collide with the primary output.
fn sidecar_path(out: Option<&Path>) -> Option<PathBuf> {
    let out = out?;
    let sidecar = out.with_extension("json");
    (sidecar != out).then_some(sidecar)
}
