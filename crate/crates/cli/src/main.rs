mod commands;
mod golden;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "expinv", version, about = "Exact series solvers, Picard iteration and RK benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a functional differential equation as an exact power series.
    Solve(SolveArgs),
    /// Derived sequences (c_n, EGF terms, root test) of a solved or stored series.
    Sequence(SequenceArgs),
    /// Numerical Picard iteration on a uniform grid.
    Picard(PicardArgs),
    /// Runge-Kutta benchmark table.
    Rk(RkArgs),
    /// Exact Padé approximant [L/M].
    Pade(PadeArgs),
    /// Run the consistency suite against the bundled reference data.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// f' = exp(f^-1)
    ExpInverse,
    /// g' = exp(g(g))
    ExpSelfcomp,
    /// g' = 1 + g(g)
    AffineSelfcomp,
    /// g' = F(g(g)), F read from --rhs
    GeneralSelfcomp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args)]
pub struct SeriesSource {
    /// Equation to solve.
    #[arg(long, value_enum, default_value = "exp-inverse")]
    pub kind: Kind,
    /// Truncation order N.
    #[arg(short = 'n', long, value_parser = clap::value_parser!(u32).range(1..))]
    pub order: Option<u32>,
    /// Series JSON file giving F for general-selfcomp.
    #[arg(long, value_name = "FILE")]
    pub rhs: Option<PathBuf>,
}

#[derive(Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: SeriesSource,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write series.json and report.{json,csv} here instead of stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SequenceArgs {
    #[command(flatten)]
    pub source: SeriesSource,
    /// Read the series from a JSON file instead of solving.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["order", "rhs"])]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct PicardArgs {
    /// Number of iterates K (f_1 is the identity).
    #[arg(short = 'k', long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(2..))]
    pub iterations: u32,
    /// Right end of the grid [0, xmax].
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    pub xmax: f64,
    /// Number of grid cells M.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(10..))]
    pub grid: u32,
    /// json prints the summary, csv prints the iterates.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write iterates.csv and summary.json here instead of stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    /// v'' v' - v' = 0, v(0) = 0, v'(0) = 2
    VQuadratic,
}

#[derive(Args)]
pub struct RkArgs {
    #[arg(long, value_enum, default_value = "v-quadratic")]
    pub problem: Problem,
    /// Step size h.
    #[arg(long, default_value_t = 0.1, value_parser = positive_f64)]
    pub step: f64,
    /// Number of steps.
    #[arg(long, default_value_t = 10)]
    pub steps: u32,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write table.csv and plot.csv (t, v) here instead of stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct PadeArgs {
    #[command(flatten)]
    pub source: SeriesSource,
    #[arg(long, value_name = "FILE", conflicts_with_all = ["order", "rhs"])]
    pub input: Option<PathBuf>,
    /// Numerator degree L.
    #[arg(long = "num", value_name = "L")]
    pub num: u32,
    /// Denominator degree M.
    #[arg(long = "den", value_name = "M")]
    pub den: u32,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Run a single suite.
    #[arg(long, value_name = "NAME", value_parser = clap::builder::PossibleValuesParser::new(verify::SUITE_NAMES))]
    pub only: Option<String>,
    /// Read reference data from this directory instead of the bundled copy.
    #[arg(long, value_name = "DIR")]
    pub golden: Option<PathBuf>,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => commands::solve(&args),
        Command::Sequence(args) => commands::sequence(&args),
        Command::Picard(args) => commands::picard(&args),
        Command::Rk(args) => commands::rk(&args),
        Command::Pade(args) => commands::pade(&args),
        Command::Verify(args) => verify::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("expinv: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
