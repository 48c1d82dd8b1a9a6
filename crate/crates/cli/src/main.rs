mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Discrete curvature, integral relations and holonomy for triangle meshes
/// and space polygons.
#[derive(Debug, Parser)]
#[command(name = "polycurv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-vertex and per-edge curvature tables with a mesh summary.
    Report(ReportArgs),
    /// Check integral relations over the whole mesh and every vertex star.
    Verify(VerifyArgs),
    /// Steiner polynomial of a convex mesh against a Monte Carlo volume.
    Steiner(SteinerArgs),
    /// Area-decreasing gradient flow.
    Flow(FlowArgs),
    /// Tangent-bundle holonomy around every interior vertex.
    Holonomy(HolonomyArgs),
    /// Turning angles, parallel frame and writhe of a polygon.
    Curve(CurveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Off,
    Obj,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct MeshInput {
    /// Mesh file (.off or .obj).
    mesh: PathBuf,
    /// Override the format inferred from the file extension.
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    input: MeshInput,
    #[arg(long, value_enum, default_value = "json")]
    format: OutFormat,
    /// Table written in CSV mode.
    #[arg(long, value_enum, default_value = "vertices")]
    table: Table,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Table {
    Vertices,
    Edges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
enum Check {
    GaussBonnet,
    ForceBalance,
    Torque,
    Position,
    VectorArea,
    Holonomy,
    Subdivision,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: MeshInput,
    /// Comma-separated checks; all by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    check: Vec<Check>,
    /// Replace every check's default tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SteinerArgs {
    #[command(flatten)]
    input: MeshInput,
    /// Neighborhood radius.
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstraintArg {
    None,
    Volume,
}

#[derive(Debug, Args)]
struct FlowArgs {
    #[command(flatten)]
    input: MeshInput,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 0.05)]
    step_size: f64,
    /// Hold all boundary vertices fixed.
    #[arg(long)]
    fix_boundary: bool,
    /// Comma-separated vertex ids to hold fixed.
    #[arg(long, value_delimiter = ',')]
    fix: Vec<usize>,
    #[arg(long, value_enum, default_value = "none")]
    constraint: ConstraintArg,
    /// Stop once the largest free-vertex residual falls below this.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 20)]
    max_halvings: usize,
    /// CSV trace: iter, area, volume, max_Hp, step_size, dA.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the final mesh as OFF.
    #[arg(long)]
    mesh_out: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HolonomyArgs {
    #[command(flatten)]
    input: MeshInput,
    #[arg(long, value_enum, default_value = "json")]
    format: OutFormat,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// Text file with one `x y z` point per line.
    curve: PathBuf,
    #[arg(long)]
    closed: bool,
    /// Report writhe as a holonomy angle and, for embedded curves, the Gauss
    /// double integral.
    #[arg(long)]
    writhe: bool,
    /// Include the parallel frame of every edge.
    #[arg(long)]
    frames: bool,
    /// Initial normal `x,y,z` for the parallel frame.
    #[arg(long, value_delimiter = ',', num_args = 3, allow_negative_numbers = true)]
    seed_normal: Option<Vec<f64>>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Non-usage failures; both exit with status 1.
enum Failure {
    Error(String),
    ChecksFailed,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Error(e.to_string())
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("POLYCURV_THREADS") else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("POLYCURV_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Report(a) => commands::report(a),
        Command::Verify(a) => commands::verify(a),
        Command::Steiner(a) => commands::steiner(a),
        Command::Flow(a) => commands::flow(a),
        Command::Holonomy(a) => commands::holonomy(a),
        Command::Curve(a) => commands::curve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
