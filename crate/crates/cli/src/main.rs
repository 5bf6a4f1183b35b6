//! `casimir`: stress profiles, edge laws, comparisons and self checks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use casimir_core::analytic::{near_edge_stress, EdgeLaw};
use casimir_core::green::{GreenOptions, Stepping};
use casimir_core::output::{write_compare_csv, write_stress_csv, write_stress_json, Comparison};
use casimir_core::profile::{detect_edges, Profile};
use casimir_core::stress::{edge_law_reference, stress_profile, QuadratureParams, RadialScheme, StressResult};
use casimir_core::validate::run_suite;
use casimir_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_ERROR: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;

#[derive(Parser)]
#[command(name = "casimir", version, about = "Casimir stress in planar inhomogeneous dielectrics")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CASIMIR_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute sigma_zz on a z grid.
    Stress(StressArgs),
    /// Evaluate the near-edge law for a list of distances.
    EdgeLaw(EdgeLawArgs),
    /// Compare numeric stress with the sum of near-edge laws.
    Compare(CompareArgs),
    /// Run the built-in self checks.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Radial {
    TanhSinh,
    GaussLaguerre,
}

#[derive(Clone, Copy, ValueEnum)]
enum SteppingArg {
    Analytic,
    Ode,
}

#[derive(Args)]
struct GridArgs {
    /// Profile JSON file.
    #[arg(long)]
    profile: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    zmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    zmax: Option<f64>,
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Explicit comma-separated z values (overrides the linear grid).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    z: Vec<f64>,
}

#[derive(Args)]
struct QuadArgs {
    #[arg(long, default_value_t = 1e-4)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    /// Radial cutoff in 1/L (default: integrate to infinity).
    #[arg(long)]
    w_max: Option<f64>,
    #[arg(long, default_value_t = 4)]
    theta_panels: usize,
    #[arg(long, default_value_t = 64)]
    max_theta_panels: usize,
    #[arg(long, value_enum, default_value_t = Radial::TanhSinh)]
    radial: Radial,
    #[arg(long, default_value_t = 64)]
    laguerre_nodes: usize,
    #[arg(long, default_value_t = 2_000_000)]
    max_evals: usize,
    #[arg(long, value_enum, default_value_t = SteppingArg::Analytic)]
    stepping: SteppingArg,
}

impl QuadArgs {
    fn params(&self) -> QuadratureParams {
        QuadratureParams {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            w_max: self.w_max,
            theta_panels: self.theta_panels,
            max_theta_panels: self.max_theta_panels,
            radial: match self.radial {
                Radial::TanhSinh => RadialScheme::TanhSinh,
                Radial::GaussLaguerre => RadialScheme::GaussLaguerre {
                    nodes: self.laguerre_nodes,
                },
            },
            max_evals: self.max_evals,
            green: GreenOptions {
                stepping: match self.stepping {
                    SteppingArg::Analytic => Stepping::Analytic,
                    SteppingArg::Ode => Stepping::Ode,
                },
                ..Default::default()
            },
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct StressArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EdgeLawArgs {
    /// Comma-separated distances from the edge.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    n0: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    quad: QuadArgs,
    /// Relative deviation defining the agreement window.
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Also rerun the stress checks at three tolerances.
    #[arg(long)]
    sweep: bool,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Debug)]
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(e.to_string())
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_profile(path: &Path) -> Result<Profile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(Profile::from_json_str(&text)?)
}

fn grid(args: &GridArgs) -> Result<Vec<f64>, Failure> {
    if !args.z.is_empty() {
        return Ok(args.z.clone());
    }
    let (Some(lo), Some(hi)) = (args.zmin, args.zmax) else {
        return Err(Failure("give --zmin and --zmax, or --z".into()));
    };
    if !(lo <= hi) || args.points == 0 || (args.points == 1 && lo != hi) {
        return Err(Failure(format!("bad grid: zmin {lo}, zmax {hi}, points {}", args.points)));
    }
    if args.points == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (args.points - 1) as f64;
    Ok((0..args.points).map(|i| lo + step * i as f64).collect())
}

fn run_stress(profile: &Profile, grid_args: &GridArgs, quad: &QuadArgs) -> Result<StressResult, Failure> {
    Ok(stress_profile(profile, &grid(grid_args)?, &quad.params())?)
}

fn status(result: &StressResult) -> u8 {
    if result.all_converged() {
        0
    } else {
        let bad = result.points.iter().filter(|p| !p.converged).count();
        eprintln!("warning: {bad} of {} points did not converge", result.points.len());
        EXIT_NOT_CONVERGED
    }
}

fn cmd_stress(args: &StressArgs) -> Result<u8, Failure> {
    let profile = load_profile(&args.grid.profile)?;
    let result = run_stress(&profile, &args.grid, &args.quad)?;
    let mut out = sink(args.out.as_deref())?;
    match args.format {
        Format::Csv => write_stress_csv(&mut out, &result)?,
        Format::Json => write_stress_json(&mut out, &result)?,
    }
    out.flush()?;
    Ok(status(&result))
}

fn cmd_edge_law(args: &EdgeLawArgs) -> Result<u8, Failure> {
    let mut out = sink(args.out.as_deref())?;
    writeln!(out, "a,sigma_zz")?;
    for &a in &args.a {
        let law = EdgeLaw::new(a, args.b, args.n0)?;
        writeln!(out, "{a:.15e},{:.15e}", near_edge_stress(&law))?;
    }
    out.flush()?;
    Ok(0)
}

fn cmd_compare(args: &CompareArgs) -> Result<u8, Failure> {
    let profile = load_profile(&args.grid.profile)?;
    let edges = detect_edges(&profile)?;
    if edges.is_empty() {
        return Err(Failure("profile has no edges to compare against".into()));
    }
    let result = run_stress(&profile, &args.grid, &args.quad)?;
    let law = edge_law_reference(&profile, &result.z())?;
    let cmp = Comparison::new(&result, &law, &edges, args.threshold);
    let mut out = sink(args.out.as_deref())?;
    write_compare_csv(&mut out, &result, &cmp)?;
    out.flush()?;
    for w in &cmp.windows {
        eprintln!(
            "edge at z = {}: within {:.0}% for a in [{:.4e}, {:.4e}] ({} points)",
            w.z_edge,
            100.0 * args.threshold,
            w.a_min,
            w.a_max,
            w.points
        );
    }
    Ok(status(&result))
}

fn cmd_validate(args: &ValidateArgs) -> Result<u8, Failure> {
    let checks = run_suite(&args.quad.params(), args.sweep)?;
    let mut out = io::stdout().lock();
    for c in &checks {
        writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
    }
    Ok(if checks.iter().all(|c| c.passed) { 0 } else { EXIT_ERROR })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    }
    let outcome = match &cli.command {
        Command::Stress(a) => cmd_stress(a),
        Command::EdgeLaw(a) => cmd_edge_law(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
