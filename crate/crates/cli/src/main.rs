mod commands;
mod parse;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Numerical checks of curvature-improved Hardy inequalities.
#[derive(Debug, Parser)]
#[command(name = "hardylab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check one inequality for one test function.
    Verify(VerifyArgs),
    /// Search a test-function family for the smallest Hardy quotient.
    Constant(ConstantArgs),
    /// Compare the conformal invariant before and after a transform.
    Invariance(InvarianceArgs),
    /// Run a grid of verifications, or the FMT comparison over several alphas.
    Sweep(SweepArgs),
    /// Check the sign and finite-difference agreement of the distance Laplacian.
    GeometryCheck(GeometryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    #[value(name = "radial-1d")]
    #[serde(rename = "radial-1d")]
    Radial1d,
    TensorGrid,
    MonteCarlo,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Report file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadArgs {
    #[arg(long, value_enum, default_value = "radial-1d")]
    pub scheme: SchemeArg,
    /// Nodes per axis, at least 64.
    #[arg(long, default_value_t = 64)]
    pub resolution: usize,
    /// Relative change under resolution doubling accepted as converged.
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Domain, e.g. `disc:R=1` or `torus:R=3,r=1`.
    #[arg(long, conflicts_with = "map", required_unless_present = "map")]
    pub domain: Option<String>,
    /// Conformal map for the pullback check, e.g. `sqrt-quadratic:rho=0.5,R=2`.
    #[arg(long)]
    pub map: Option<String>,
    /// Inequality name; ignored with --map.
    #[arg(long, default_value = "general-ridge")]
    pub ineq: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Support band `a,b` in units of distance.
    #[arg(long)]
    pub band: String,
    #[arg(long, default_value = "smooth-bump")]
    pub profile: String,
    /// Boundary side for annuli: both, inner or outer.
    #[arg(long, default_value = "both")]
    pub side: String,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConstantArgs {
    #[arg(long)]
    pub domain: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 400)]
    pub max_evals: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InvarianceArgs {
    #[arg(long)]
    pub map: String,
    /// `scale:s=3`, `rotation:theta=0.6` or `inversion`.
    #[arg(long)]
    pub transform: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub domain: String,
    /// Inequality name, or `fmt-compare`.
    #[arg(long)]
    pub ineq: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Bands `a,b;a,b;...`.
    #[arg(long, default_value = "")]
    pub bands: String,
    /// Profiles separated by `;`.
    #[arg(long, default_value = "smooth-bump")]
    pub profiles: String,
    /// Resolutions separated by `,`.
    #[arg(long, default_value = "64")]
    pub resolutions: String,
    /// Alphas for `fmt-compare`, separated by `,`.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub alphas: String,
    /// Radii sampled per alpha for `fmt-compare`.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value = "both")]
    pub side: String,
    #[arg(long, value_enum, default_value = "radial-1d")]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GeometryArgs {
    #[arg(long)]
    pub domain: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Minimum distance of samples from boundary and ridge, relative to scale.
    #[arg(long, default_value_t = 1e-3)]
    pub margin: f64,
    /// Clearance, relative to scale, of the points used for the
    /// finite-difference comparison.
    #[arg(long, default_value_t = 0.05)]
    pub fd_margin: f64,
    #[command(flatten)]
    pub common: Common,
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("HARDYLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("HARDYLAB_THREADS must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let (result, common) = match &cli.command {
        Command::Verify(a) => (commands::verify(a), &a.common),
        Command::Constant(a) => (commands::constant(a), &a.common),
        Command::Invariance(a) => (commands::invariance(a), &a.common),
        Command::Sweep(a) => (commands::sweep(a), &a.common),
        Command::GeometryCheck(a) => (commands::geometry_check(a), &a.common),
    };
    match result {
        Err(commands::Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok((body, passed)) => {
            if let Err(msg) = report::emit(&body, common.output.as_deref()) {
                eprintln!("error: {msg}");
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
