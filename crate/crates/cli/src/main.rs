//! `steerlab` command-line front-end.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 admissibility or verification failure,
//! 3 enumeration cap exceeded.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use steerlab::steering::DEFAULT_ENUMERATION_CAP;
use steerlab::{tol, Error as CoreError, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "steerlab", version, about = "Steering bounds for generalized equiangular measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a parameter document against every admissibility rule.
    Validate(Common),
    /// Analytic bounds, S_Q and the violation guarantee from parameters or a family.
    Bounds(Common),
    /// Exact LHS value of a family by deterministic-strategy enumeration.
    Lhs(Common),
    /// Closed-form dimension sweep written as CSV.
    Sweep(Common),
    /// Trace-relation residuals of a family.
    VerifyOps(VerifyArgs),
    /// Write a built-in measurement family as JSON.
    Build(BuildArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Input JSON document.
    #[arg(long, short)]
    input: PathBuf,
    /// Output path; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// One-based setting indices, e.g. `1,3`.
    #[arg(long, value_delimiter = ',')]
    select: Option<Vec<usize>>,
    /// Maximum number of deterministic strategies to enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Fall back to a coordinate-ascent lower bound when the cap is exceeded.
    #[arg(long)]
    heuristic: bool,
    /// Worker threads.
    #[arg(long, env = "STEERLAB_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Slack for scalar constraints such as the weight sum.
    #[arg(long, default_value_t = tol::CONSTRAINT, value_parser = positive)]
    tol_constraint: f64,
    /// Smallest eigenvalue accepted as positive semidefinite (negated).
    #[arg(long, default_value_t = tol::PSD, value_parser = positive)]
    tol_psd: f64,
    /// Residual accepted for the trace relations and the resolution of identity.
    #[arg(long, default_value_t = tol::RESOLUTION, value_parser = positive)]
    tol_relation: f64,
    /// Power-iteration convergence threshold.
    #[arg(long, default_value_t = tol::EIGEN, value_parser = positive)]
    tol_eig: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            constraint: self.tol_constraint,
            psd: self.tol_psd,
            relation: self.tol_relation,
            eig: self.tol_eig,
            ..Tolerances::default()
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Parameter document to verify against; inferred from the family when omitted.
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BuildKind {
    Mub,
    Mum,
    Sic,
    NmPovm,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(value_enum)]
    kind: BuildKind,
    /// Hilbert-space dimension.
    #[arg(long)]
    d: usize,
    /// Number of settings (`L` for MUBs and MUMs, `N` for (N,M)-POVMs).
    #[arg(long, default_value_t = 1)]
    settings: usize,
    /// Outcomes per setting for (N,M)-POVMs.
    #[arg(long)]
    outcomes: Option<usize>,
    /// Sharpness of MUMs, in (1/d, 1].
    #[arg(long)]
    kappa: Option<f64>,
    /// Spread parameter of (N,M)-POVMs.
    #[arg(long)]
    x: Option<f64>,
    /// Output path; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("tolerance must be positive, got {s}"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 1,
            CliError::Failed(_) => 2,
            CliError::Core(e) => match e {
                CoreError::EnumerationCapExceeded { .. } => 3,
                CoreError::Admissibility { .. }
                | CoreError::NotEquiangular { .. }
                | CoreError::InvalidDistribution(_)
                | CoreError::UnsupportedDimension { .. }
                | CoreError::Construction(_) => 2,
                _ => 1,
            },
        }
    }
}

fn configure_pool(jobs: Option<u64>) -> Result<(), CliError> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate(c) => commands::validate(&c),
        Command::Bounds(c) => {
            configure_pool(c.jobs)?;
            commands::bounds(&c)
        }
        Command::Lhs(c) => {
            configure_pool(c.jobs)?;
            commands::lhs(&c)
        }
        Command::Sweep(c) => {
            configure_pool(c.jobs)?;
            commands::sweep(&c)
        }
        Command::VerifyOps(v) => commands::verify_ops(&v),
        Command::Build(b) => commands::build(&b),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
