mod cantor;
mod entropy;
mod geometry;
mod output;
mod tree;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hilbert_lab::geometry::spec_file::DomainSpec;
use hilbert_lab::{ConvexDomain, Error, Point2, Result};
use serde::Serialize;

use output::{write_output, Report};

pub const THREADS_ENV: &str = "HILBERT_LAB_THREADS";

#[derive(Parser, Serialize)]
#[command(name = "hilbert-lab", version, about = "Hilbert geometry sweeps with CSV and JSON output")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; HILBERT_LAB_THREADS takes precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Relative quadrature tolerance, in (0, 1e-2).
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub quad_tol: f64,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "snake_case", tag = "subcommand")]
enum Command {
    /// Hilbert distance between two points.
    Dist(geometry::DistArgs),
    /// Finsler norm of a vector at a point.
    Norm(geometry::NormArgs),
    /// Busemann density and Finsler unit ball area at a point.
    Sigma(geometry::SigmaArgs),
    /// Blow-up ratio σ(λp)(1-λ)^{3/2} approaching a boundary point.
    Blowup(geometry::BlowupArgs),
    /// Centro-projective area.
    Area(geometry::AreaArgs),
    /// Cantor-Lebesgue functions, measures and domains.
    #[command(subcommand)]
    Cantor(cantor::CantorCommand),
    /// Sphere lengths, ball volumes, gap series and bounds.
    #[command(subcommand)]
    Entropy(entropy::EntropyCommand),
    /// Interval trees over Cantor sets and embeddings.
    #[command(subcommand)]
    Tree(tree::TreeCommand),
}

#[derive(Args, Serialize, Clone)]
pub struct DomainArgs {
    /// JSON domain spec.
    #[arg(long)]
    pub domain: PathBuf,
    /// Override the spec's geometric tolerance.
    #[arg(long)]
    pub tol_geo: Option<f64>,
}

impl DomainArgs {
    pub fn load(&self) -> Result<ConvexDomain> {
        let mut spec = DomainSpec::load(&self.domain).map_err(|e| match e {
            Error::Io(io) => Error::InvalidSpec(format!("{}: {io}", self.domain.display())),
            other => other,
        })?;
        if self.tol_geo.is_some() {
            spec.tol_geo = self.tol_geo;
        }
        spec.build()
    }
}

pub fn parse_point(s: &str) -> std::result::Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => {
            let x: f64 = x.parse().map_err(|_| format!("bad coordinate {x:?}"))?;
            let y: f64 = y.parse().map_err(|_| format!("bad coordinate {y:?}"))?;
            Ok([x, y])
        }
        _ => Err(format!("expected x,y but got {s:?}")),
    }
}

pub fn pt(p: [f64; 2]) -> Point2 {
    Point2::new(p[0], p[1])
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidParameter(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        Err(_) => Ok(flag),
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let common = &cli.common;
    if !(common.quad_tol > 0.0 && common.quad_tol < 1e-2) {
        return Err(Error::InvalidParameter(format!("quad_tol = {} outside (0, 1e-2)", common.quad_tol)));
    }
    if let Some(n) = thread_count(common.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    }
    let config = serde_json::to_value(cli)?;
    match &cli.command {
        Command::Dist(a) => geometry::dist(a, config),
        Command::Norm(a) => geometry::norm(a, config),
        Command::Sigma(a) => geometry::sigma(a, common, config),
        Command::Blowup(a) => geometry::blowup(a, common, config),
        Command::Area(a) => geometry::area(a, common, config),
        Command::Cantor(c) => cantor::run(c, config),
        Command::Entropy(c) => entropy::run(c, common, config),
        Command::Tree(c) => tree::run(c, config),
    }
}

fn emit(report: &Report, common: &Common) -> Result<()> {
    if let Some(raw) = &report.raw {
        return write_output(raw, common.output.as_deref());
    }
    match common.format {
        Format::Csv => {
            write_output(&report.csv(), common.output.as_deref())?;
            eprint!("{}", report.summary_lines());
            Ok(())
        }
        Format::Json => write_output(&report.json(), common.output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| emit(&r, &cli.common)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
