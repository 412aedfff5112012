//! Command-line front end: `sdb bounds | figure1 | simulate | verify | control`.
//!
//! Every subcommand writes into `--out` a set of CSV/JSON files plus
//! `manifest.json`. CSVs start with a `# {json}` line holding the
//! subcommand, parameters, seed and version, so identical invocations give
//! byte-identical files.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use manifest::{OutputDir, RunHeader, RunManifest};

use crate::error::{invalid, Result};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "sdb", version, about = "Density bounds for SDEs with bounded drift")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate alpha and beta (or the product bounds for d > 1).
    Bounds(BoundsArgs),
    /// Bounds and simulated densities for the four panels t = 0.25 .. 1.
    Figure1(Figure1Args),
    /// Simulate an SDE and write its terminal sample.
    Simulate(SimulateArgs),
    /// Simulate a drift and check its density against the bounds.
    Verify(VerifyArgs),
    /// Solve the discrete control problem by backward induction.
    Control(ControlArgs),
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    if !(lo <= hi) {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

/// Comma-separated coordinates, e.g. `0.5,-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    s.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| format!("'{c}': {e}")))
        .collect::<std::result::Result<Vec<f64>, String>>()
        .map(Point)
}

fn parse_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|c| c.trim().parse::<usize>().map_err(|e| format!("'{c}': {e}")))
        .collect()
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub t: f64,
    #[arg(long = "C", default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Evaluation range `lo:hi`; in d > 1 the points are (x, 0, ..., 0).
    #[arg(long, default_value = "-3:3", value_parser = parse_range, allow_hyphen_values = true)]
    pub range: (f64, f64),
    #[arg(long, default_value_t = 121)]
    pub n: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Figure1Args {
    #[arg(long, default_value = "figure1")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 200_000)]
    pub n_paths: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 0.05)]
    pub bin_width: f64,
    #[arg(long, env = "SDB_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Built-in drift name (`zero`, `const@v`, `worst-minus@a`, `worst-plus@a`,
    /// `sin-half`, `running-max`, `clamp-lin@k`) or `expr:<formula>`.
    #[arg(long, default_value = "zero", allow_hyphen_values = true)]
    pub drift: String,
    #[arg(long = "C", default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Start, comma separated; a single value is repeated over all coordinates.
    #[arg(long, default_value = "0", value_parser = parse_point, allow_hyphen_values = true)]
    pub x0: Point,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 10_000)]
    pub n_paths: usize,
    #[arg(long, env = "SDB_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Also write every path.
    #[arg(long)]
    pub full_paths: bool,
    /// Simulate `|Y^±|²` from its own SDE instead of the drift.
    #[arg(long, value_enum)]
    pub square_radius: Option<Side>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long, default_value = "zero", allow_hyphen_values = true)]
    pub drift: String,
    #[arg(long = "C", default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value = "0", value_parser = parse_point, allow_hyphen_values = true)]
    pub x0: Point,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 200_000)]
    pub n_paths: usize,
    #[arg(long, env = "SDB_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "-3:3", value_parser = parse_range, allow_hyphen_values = true)]
    pub range: (f64, f64),
    #[arg(long, default_value_t = 121)]
    pub n: usize,
    /// Histogram bin width (d = 1).
    #[arg(long, default_value_t = 0.05)]
    pub bin_width: f64,
    /// Ball radius (d > 1).
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveArg {
    Max,
    Min,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ControlArgs {
    #[arg(long = "T", default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "max")]
    pub objective: ObjectiveArg,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    /// Allowed |V_0 - oracle|; defaults to 1/n, the size of the
    /// time-discretisation error.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Also run a refinement study over these step counts, e.g. 16,64,256.
    #[arg(long, value_parser = parse_list)]
    pub convergence: Option<Vec<usize>>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Result of one subcommand.
#[derive(Debug)]
pub struct Outcome {
    pub manifest: RunManifest,
    /// Machine-readable description of what failed, when `!passed`.
    pub failure: Option<serde_json::Value>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.manifest.passed
    }
}

/// Runs a parsed command line. Verification failures are reported through
/// [`Outcome`]; `Err` means the run itself could not be carried out.
pub fn run(cli: Cli) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(invalid("--threads must be at least 1"));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let start = Instant::now();
    let (header, mut out, failure) = match &cli.command {
        Command::Bounds(a) => commands::bounds(a)?,
        Command::Figure1(a) => commands::figure1(a)?,
        Command::Simulate(a) => commands::simulate_cmd(a)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Control(a) => commands::control(a)?,
    };
    if let Some(f) = &failure {
        out.json("failure.json", f)?;
    }
    let manifest = out.finish(header, start.elapsed().as_secs_f64(), failure.is_none())?;
    Ok(Outcome { manifest, failure })
}
