//! `lambertarc` — two-body boundary-value arcs from the command line.
//!
//! Four subcommands over one problem grammar:
//!
//! * `solve`  — find every arc from A to B with the given time of flight
//! * `count`  — census of arcs per revolution class, without solving
//! * `curve`  — tabulate time of flight against a sweep parameter
//! * `verify` — solve, then propagate each arc and report the arrival miss
//!
//! The geometry is given in exactly one of three ways: cartesian
//! endpoints (`--ax --ay --bx --by`, the attracting center at the
//! origin), triangle scalars (`--ra --rb` with `--theta` or `--chord`),
//! or the rectilinear pair (`--rectilinear --xa --xb`). Times,
//! velocities, and energies honor `--mu`; lengths are never rescaled.
//!
//! Exit codes: 0 report written (solutions found where applicable),
//! 1 usage or domain error, 2 valid query with no solutions,
//! 3 numerical failure.

mod commands;
mod problem;
mod report;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Query;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_EMPTY: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// A command failure, classified for the exit code: bad queries exit 1,
/// numerical breakdowns inside valid queries exit 3.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    pub fn from_lib(e: impl Into<lambertarc::Error>) -> Self {
        let e = e.into();
        if e.is_domain_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }

    pub fn with_context(self, context: &str) -> Self {
        match self {
            Failure::Usage(m) => Failure::Usage(format!("{context}: {m}")),
            Failure::Numerical(m) => Failure::Numerical(format!("{context}: {m}")),
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => m,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lambertarc",
    version,
    about = "Keplerian boundary-value arcs: solve, count, sweep, verify",
    after_help = "Exit codes: 0 ok, 1 usage/domain error, 2 no solutions, 3 numerical failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find every arc from A to B with the given time of flight.
    Solve(SolveArgs),
    /// Count arcs per revolution class without computing them.
    Count(CountArgs),
    /// Tabulate time of flight against a sweep parameter.
    Curve(CurveArgs),
    /// Solve, then propagate each arc and report the arrival miss.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Endpoint A x-coordinate (cartesian mode; needs --ay --bx --by).
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    ax: Option<f64>,
    /// Endpoint A y-coordinate.
    #[arg(long, value_name = "Y", allow_negative_numbers = true)]
    ay: Option<f64>,
    /// Endpoint B x-coordinate.
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    bx: Option<f64>,
    /// Endpoint B y-coordinate.
    #[arg(long, value_name = "Y", allow_negative_numbers = true)]
    by: Option<f64>,

    /// Radius |OA| (triangle mode; pair with --rb and --theta or --chord).
    #[arg(long, value_name = "R")]
    ra: Option<f64>,
    /// Radius |OB|.
    #[arg(long, value_name = "R")]
    rb: Option<f64>,
    /// Transfer angle in radians, counter-clockwise, in (0, 2π).
    #[arg(long, value_name = "RAD", allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Chord length |AB| (transfer angle taken in (0, π]).
    #[arg(long, value_name = "C")]
    chord: Option<f64>,

    /// Interpret --xa/--xb as the rectilinear pair (arcs on a ray
    /// through the center).
    #[arg(long)]
    rectilinear: bool,
    /// Departure radius xA of the rectilinear problem.
    #[arg(long, value_name = "XA")]
    xa: Option<f64>,
    /// Arrival radius xB, with 0 ≤ xB < xA.
    #[arg(long, value_name = "XB")]
    xb: Option<f64>,

    /// Gravitational parameter of the center.
    #[arg(long, value_name = "MU", default_value_t = 1.0)]
    mu: f64,
}

impl ProblemArgs {
    fn query(&self) -> Result<Query, Failure> {
        let spec = problem::resolve_mode(
            self.ax,
            self.ay,
            self.bx,
            self.by,
            self.ra,
            self.rb,
            self.theta,
            self.chord,
            self.rectilinear,
            self.xa,
            self.xb,
        )?;
        Query::new(spec, self.mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassFilter {
    Direct,
    Indirect,
    All,
}

impl ClassFilter {
    pub fn tails(&self) -> &'static [lambertarc::Tail] {
        use lambertarc::Tail;
        match self {
            ClassFilter::Direct => &[Tail::Direct],
            ClassFilter::Indirect => &[Tail::Indirect],
            ClassFilter::All => &[Tail::Direct, Tail::Indirect],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveClass {
    Direct,
    Indirect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParamKind {
    /// Departure velocity vA.
    Va,
    /// Conic parameter η of the symmetric image.
    Eta,
    /// Universal shape parameter β̂ (numerically equal to η).
    Betahat,
    /// Normalized velocity x = vA/vE.
    X,
}

impl ParamKind {
    pub fn name(&self) -> &'static str {
        match self {
            ParamKind::Va => "va",
            ParamKind::Eta => "eta",
            ParamKind::Betahat => "betahat",
            ParamKind::X => "x",
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Time of flight (required unless --batch).
    #[arg(long, value_name = "T", allow_negative_numbers = true)]
    tof: Option<f64>,
    /// Arc classes to include.
    #[arg(long, value_enum, default_value_t = ClassFilter::All)]
    class: ClassFilter,
    /// Solve exactly this revolution count.
    #[arg(long, value_name = "N", conflicts_with = "nmax")]
    revs: Option<u32>,
    /// Solve every revolution count 0..=NMAX.
    #[arg(long, value_name = "NMAX")]
    nmax: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Solve one problem per JSONL line from this file (parallel, output
    /// order matches input order; geometry flags are ignored).
    #[arg(long, value_name = "PATH")]
    batch: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Time of flight.
    #[arg(long, value_name = "T", allow_negative_numbers = true)]
    tof: f64,
    /// Census revolution counts 0..=NMAX.
    #[arg(long, value_name = "NMAX", default_value_t = 3)]
    nmax: u32,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Which simple class to sweep.
    #[arg(long, value_enum, default_value_t = CurveClass::Direct)]
    class: CurveClass,
    /// Sweep parameter.
    #[arg(long, value_enum, default_value_t = ParamKind::Va)]
    param: ParamKind,
    /// First parameter value.
    #[arg(long, value_name = "P", allow_negative_numbers = true)]
    from: f64,
    /// Last parameter value.
    #[arg(long, value_name = "P", allow_negative_numbers = true)]
    to: f64,
    /// Number of evenly spaced samples.
    #[arg(long, value_name = "N", default_value_t = 200)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Time of flight.
    #[arg(long, value_name = "T", allow_negative_numbers = true)]
    tof: f64,
    /// Arc classes to include.
    #[arg(long, value_enum, default_value_t = ClassFilter::All)]
    class: ClassFilter,
    /// Verify exactly this revolution count.
    #[arg(long, value_name = "N", conflicts_with = "nmax")]
    revs: Option<u32>,
    /// Verify every revolution count 0..=NMAX.
    #[arg(long, value_name = "NMAX")]
    nmax: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are not errors; everything else is a
            // usage problem and must exit 1 rather than clap's 2.
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };

    let outcome = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Count(args) => args.problem.query().and_then(|q| {
            commands::cmd_count(&q, args.tof, args.nmax, args.format, args.out.as_deref())
        }),
        Command::Curve(args) => args.problem.query().and_then(|q| {
            commands::cmd_curve(
                &q,
                args.class,
                args.param,
                args.from,
                args.to,
                args.samples,
                args.format,
                args.out.as_deref(),
            )
        }),
        Command::Verify(args) => args.problem.query().and_then(|q| {
            commands::cmd_verify(
                &q,
                args.tof,
                args.class,
                args.revs,
                args.nmax,
                args.format,
                args.out.as_deref(),
            )
        }),
    };

    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.exit_code()
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<i32, Failure> {
    if let Some(batch) = &args.batch {
        return commands::cmd_solve_batch(batch, args.out.as_deref());
    }
    let tof = args
        .tof
        .ok_or_else(|| Failure::Usage("--tof is required (or pass problems via --batch)".into()))?;
    let q = args.problem.query()?;
    commands::cmd_solve(
        &q,
        tof,
        args.class,
        args.revs,
        args.nmax,
        args.format,
        args.out.as_deref(),
    )
}
