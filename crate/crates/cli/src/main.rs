//! `cohgeom`: runs the library's verification suites and writes CSV or
//! JSON reports. Exit status 0 when every check passes, 1 when one fails,
//! 2 on a usage error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod parse;
mod report;
mod settings;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{render_csv, render_json};
use settings::Settings;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] cohgeom::Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cohgeom", version, about = "Coherent-state geometry and quantization checks")]
struct Cli {
    /// Flat key=value file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report path; stdout if omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pullback of the Fubini-Study form along a state family.
    Pullback(PullbackArgs),
    /// Robertson-Schrodinger relations for coherent and squeezed states.
    Uncertainty(UncertaintyArgs),
    /// The SUT(2,R) coadjoint orbit and its prequantization.
    #[command(subcommand)]
    Sut(SutCommand),
    /// Berezin quantization of the half plane.
    #[command(subcommand)]
    Berezin(BerezinCommand),
    /// Every suite with default parameters, one summary row each.
    ReportAll,
}

#[derive(Debug, Default, Args)]
pub struct PullbackArgs {
    /// wh, su2 or su11.
    #[arg(long)]
    pub family: Option<String>,
    /// Squeeze parameter v.
    #[arg(long)]
    pub squeeze: Option<String>,
    /// Spin j (su2) or discrete-series label k (su11).
    #[arg(long)]
    pub rep: Option<String>,
    /// Sample counts NxM on the square inscribed in |alpha| <= radius.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub radius: Option<String>,
    /// Relative tolerance against the closed form.
    #[arg(long)]
    pub tol: Option<String>,
    /// Tolerance for analytic against finite-difference tangents.
    #[arg(long)]
    pub oracle_tol: Option<String>,
    /// Finite-difference step.
    #[arg(long)]
    pub step: Option<String>,
}

#[derive(Debug, Default, Args)]
pub struct UncertaintyArgs {
    /// Fock levels.
    #[arg(long)]
    pub n: Option<String>,
    /// Displacement re,im.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Squeeze |v|; the states v = 0, v and -v are checked.
    #[arg(long)]
    pub squeeze: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    /// Smallest residual accepted for a mismatched lambda.
    #[arg(long)]
    pub mismatch: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum SutCommand {
    /// KKS form, moment maps and Poisson brackets.
    Kks(SutArgs),
    /// Chart transitions and chart forms.
    Charts(SutArgs),
    /// Flows of the prequantum operators against their generators.
    Flow(SutArgs),
    /// Dirac condition under the four sign conventions.
    Dirac(SutArgs),
}

#[derive(Debug, Default, Args)]
pub struct SutArgs {
    /// Axes such as `t:0.5..4:8 s:-2..2:8` (charts use a and b).
    #[arg(long, num_args = 1..)]
    pub grid: Vec<String>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub hbar: Option<String>,
    /// Orbit base point u0.
    #[arg(long)]
    pub u0: Option<String>,
    /// Orbit base point v0.
    #[arg(long)]
    pub v0: Option<String>,
}

impl SutArgs {
    pub fn grid(&self) -> Option<String> {
        (!self.grid.is_empty()).then(|| self.grid.join(" "))
    }
}

#[derive(Debug, Subcommand)]
pub enum BerezinCommand {
    /// Gram matrix of the basis by quadrature.
    Gram(BerezinArgs),
    /// Kernel and the reproducing property.
    Kernel(BerezinArgs),
    /// Symbols of basic operators.
    Symbol(BerezinArgs),
    /// Star product against pointwise product and Poisson bracket.
    Star(BerezinArgs),
}

#[derive(Debug, Default, Args)]
pub struct BerezinArgs {
    #[arg(long)]
    pub h: Option<String>,
    /// Comma-separated h values (star).
    #[arg(long)]
    pub hs: Option<String>,
    /// Basis levels, or `auto`.
    #[arg(long)]
    pub cutoff: Option<String>,
    #[arg(long)]
    pub radial: Option<String>,
    #[arg(long)]
    pub angular: Option<String>,
    /// jacobi or legendre.
    #[arg(long)]
    pub rule: Option<String>,
    /// Half-plane point re,im; repeatable.
    #[arg(long)]
    pub point: Vec<String>,
    /// Basis level for the reproducing check.
    #[arg(long)]
    pub level: Option<String>,
    /// identity, mult-z, mult-zbar or projector.
    #[arg(long)]
    pub op: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub kernel_tol: Option<String>,
    /// Smallest accepted convergence order (star).
    #[arg(long)]
    pub min_order: Option<String>,
}

impl BerezinArgs {
    pub fn points(&self) -> Option<String> {
        (!self.point.is_empty()).then(|| self.point.join(";"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err("expected csv or json".into()),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let mut settings = Settings::load(cli.config.as_deref())?;
    let format: Format = settings.get("format", cli.format.as_deref(), "csv")?;
    let output: String = settings.get("output", cli.output.as_ref().and_then(|p| p.to_str()), "-")?;
    let report = match &cli.command {
        Command::Pullback(a) => suites::pullback::run(&mut settings, a)?,
        Command::Uncertainty(a) => suites::uncertainty::run(&mut settings, a)?,
        Command::Sut(c) => suites::sut::run(&mut settings, c)?,
        Command::Berezin(c) => suites::berezin::run(&mut settings, c)?,
        Command::ReportAll => suites::report_all()?,
    };
    let config = settings.finish()?;
    let text = match format {
        Format::Csv => render_csv(&report),
        Format::Json => render_json(&report, &config),
    };
    if output == "-" {
        std::io::stdout().write_all(text.as_bytes())?;
    } else {
        std::fs::write(&output, text)?;
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
