//! Command-line front end.
//!
//! Every command writes either JSON to stdout or a CSV/text body preceded by
//! a `#` manifest block. Output is assembled in memory and written in one go,
//! so a failing run leaves no partial file.

mod commands;
mod manifest;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

pub use manifest::RunManifest;

use crate::error::Error;

/// Exit status for a domain error (bad input or precondition).
pub const EXIT_DOMAIN: i32 = 2;
/// Exit status for a numerical failure.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gti-asym", version, about = "Uniform asymptotics of incomplete gamma functions and generalised trigonometric integrals")]
pub struct Cli {
    /// Omit the timestamp line from manifests.
    #[arg(long, global = true)]
    pub reproducible: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function by its Liouville-Green expansion (JSON).
    Eval(EvalArgs),
    /// Zeros by uniform asymptotic expansion (CSV).
    Zeros(ZerosArgs),
    /// Print expansion coefficients.
    Coeffs(CoeffsArgs),
    /// Error bound for the truncated expansion (JSON).
    Bounds(BoundsArgs),
    /// Data behind the figures (CSV).
    #[command(subcommand)]
    Figure(FigureCommand),
    /// Reference values by quadrature.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["family", "igf"])))]
pub struct EvalArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Option<crate::gti::Gti>,
    /// Incomplete gamma function instead of an integral.
    #[arg(long, value_enum)]
    pub igf: Option<Igf>,
    #[arg(long, value_parser = parse_decimal)]
    pub a: f64,
    #[arg(long, value_parser = parse_decimal, requires = "family")]
    pub theta: Option<f64>,
    /// Argument `RE,IM`; the function is evaluated at `a z`.
    #[arg(long, value_parser = parse_complex, requires = "igf")]
    pub z: Option<(f64, f64)>,
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    #[arg(long, value_parser = parse_decimal, default_value = "0")]
    pub alpha: f64,
    #[arg(long)]
    pub bound: bool,
    #[arg(long)]
    pub extended: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Igf {
    Lower,
    Upper,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: crate::gti::Gti,
    #[arg(long, value_parser = parse_decimal)]
    pub a: f64,
    /// Index or range `M1..M2`.
    #[arg(long, value_parser = parse_range)]
    pub m: RangeInclusive<u32>,
    #[arg(long = "K", default_value_t = crate::zeros::DEFAULT_K)]
    pub k: usize,
    #[arg(long, value_parser = parse_decimal, default_value = "0")]
    pub alpha: f64,
    /// Also locate each zero with the quadrature oracle.
    #[arg(long)]
    pub refine: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub order: usize,
    #[arg(long)]
    pub json: bool,
    /// Also list the zero coefficients q_2..q_K.
    #[arg(long = "q")]
    pub q: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_parser = parse_decimal)]
    pub a: f64,
    #[arg(long, value_parser = parse_complex)]
    pub z: (f64, f64),
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub kind: BoundKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    Zero,
    Infinity,
}

#[derive(Debug, Subcommand)]
pub enum FigureCommand {
    /// Level curves of Re xi.
    LevelCurves(LevelArgs),
    /// log10 |Delta| along the assembled Ci zeros.
    DeltaPlot(DeltaArgs),
}

#[derive(Debug, Args)]
pub struct LevelArgs {
    /// Comma-separated levels.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_decimal,
          default_value = "-1,-0.5,-0.25,0,0.25,0.5,1")]
    pub c: Vec<f64>,
    #[arg(long, default_value_t = 800)]
    pub nx: usize,
    #[arg(long, default_value_t = 800)]
    pub ny: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    #[arg(long, value_parser = parse_decimal)]
    pub a: f64,
    #[arg(long = "m-max", default_value_t = 100)]
    pub m_max: u32,
    #[arg(long = "K", default_value_t = crate::zeros::DEFAULT_K)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["theta", "grid"])))]
pub struct OracleArgs {
    #[arg(long, value_parser = parse_family, required_unless_present = "grid")]
    pub family: Option<crate::gti::Gti>,
    #[arg(long, value_parser = parse_decimal, required_unless_present = "grid")]
    pub a: Option<f64>,
    /// The integral is evaluated at `a theta`.
    #[arg(long, value_parser = parse_decimal)]
    pub theta: Option<f64>,
    #[arg(long, value_parser = parse_decimal, default_value = "0")]
    pub alpha: f64,
    #[arg(long)]
    pub extended: bool,
    /// CSV with columns family,a,theta and optionally alpha.
    #[arg(long, conflicts_with_all = ["family", "a"])]
    pub grid: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a CLI run, carrying its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_domain() { EXIT_DOMAIN } else { EXIT_NUMERICAL };
        Self { code, message: e.to_string() }
    }
}

impl CliError {
    fn domain(message: impl Into<String>) -> Self {
        Self { code: EXIT_DOMAIN, message: message.into() }
    }
}

fn parse_family(s: &str) -> Result<crate::gti::Gti, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Plain decimal notation only: no exponents, no `inf`/`nan`, no hex.
pub fn parse_decimal(s: &str) -> Result<f64, String> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    let mut parts = body.splitn(2, '.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next().unwrap_or("");
    let digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if int.is_empty() && frac.is_empty() || !digits(int) || !digits(frac) {
        return Err(format!("'{s}' is not a decimal number"));
    }
    s.parse().map_err(|_| format!("'{s}' is not a decimal number"))
}

fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got '{s}'"))?;
    Ok((parse_decimal(re.trim())?, parse_decimal(im.trim())?))
}

/// `M` or `M1..M2`, both ends inclusive and at least 1.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |p: &str| p.trim().parse::<u32>().map_err(|_| format!("bad index '{p}'"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let m = num(s)?;
            (m, m)
        }
    };
    if lo == 0 || hi < lo {
        return Err(format!("index range '{s}' must satisfy 1 <= M1 <= M2"));
    }
    Ok(lo..=hi)
}

/// Rayon pool honouring `GTI_ASYM_THREADS`.
fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("GTI_ASYM_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::domain(format!("GTI_ASYM_THREADS must be a positive integer, got '{v}'")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError { code: EXIT_NUMERICAL, message: e.to_string() })
}

/// Run a parsed command, writing stdout output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let r = cli.reproducible;
    match cli.command {
        Command::Eval(a) => commands::eval(a, out),
        Command::Zeros(a) => commands::zeros(a, r, out),
        Command::Coeffs(a) => commands::coeffs(a, out),
        Command::Bounds(a) => commands::bounds(a, out),
        Command::Figure(FigureCommand::LevelCurves(a)) => commands::level_curves(a, r, out),
        Command::Figure(FigureCommand::DeltaPlot(a)) => commands::delta_plot(a, r, out),
        Command::Oracle(a) => commands::oracle(a, r, out),
    }
}

/// Parse arguments and run; returns the process exit status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
