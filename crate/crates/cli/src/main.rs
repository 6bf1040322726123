mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Time-fractional diffusion on graphs: reproducible experiments as CSV.
///
/// Every command is deterministic given its flags and seed. Tables go to
/// `--out` (written atomically) or to stdout. Set SUBDIFF_THREADS to cap
/// the worker pool.
#[derive(Parser, Debug)]
#[command(name = "subdiff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph and write it as an edge list.
    GenGraph(GenGraphArgs),
    /// Integration windows [theta_min, theta_max] for each (alpha, epsilon).
    WindowTable(WindowTableArgs),
    /// SOE nodes and weights sorted by weight, largest first.
    SoeTable(SoeTableArgs),
    /// log10 scalar error of the SOE scheme over (alpha, t, J).
    ErrorHeatmap(HeatmapArgs),
    /// Exact and SOE waiting-time survival, pdf and hazard.
    Survival(SurvivalArgs),
    /// Subdiffusive shortest paths against topological geodesics.
    Paths(PathsArgs),
    /// Small-time convexity signs and memory bias around a source vertex.
    MemoryReport(MemoryArgs),
    /// Monte-Carlo checks of the time-changed random walk.
    Ctrw(CtrwArgs),
    /// Laplace-domain resolvent and Volterra residuals.
    VolterraCheck(VolterraArgs),
}

/// Graph source. With none of these flags each command uses its own default.
#[derive(Args, Debug, Clone)]
#[group(multiple = false)]
pub struct GraphArgs {
    /// Edge-list file, one "u v" pair per line, '#' comments
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Connected Erdos-Renyi graph with N vertices and M edges
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    pub er: Option<Vec<usize>>,
    /// Gabriel graph on N random points
    #[arg(long, value_name = "N")]
    pub gabriel: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GenGraphArgs {
    /// [default: --er 250 1000]
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Edge-list output file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write point coordinates as "vertex,x,y" (Gabriel graphs only)
    #[arg(long, value_name = "FILE")]
    pub coords: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct WindowTableArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.3,0.5,0.7,0.8")]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1e-6,1e-8,1e-10,1e-12")]
    pub epsilon: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SoeTableArgs {
    #[arg(long, default_value_t = 0.85)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub epsilon: f64,
    /// Number of nodes
    #[arg(long, default_value_t = 111)]
    pub j: usize,
    /// Keep only the largest weights
    #[arg(long)]
    pub top: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HeatmapArgs {
    /// [default: --er 250 1000]
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.8,0.5,0.25")]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub epsilon: f64,
    /// Node counts [default: 5,10,...,120; with --full 2,4,...,120]
    #[arg(long, value_delimiter = ',')]
    pub j: Option<Vec<usize>>,
    #[arg(long, default_value_t = 11.0)]
    pub t_lo: f64,
    #[arg(long, default_value_t = 1001.0)]
    pub t_hi: f64,
    /// [default: 30; with --full 300]
    #[arg(long)]
    pub t_steps: Option<usize>,
    /// Points of the uniform spectral grid on [0, lambda_max]
    #[arg(long, default_value_t = 2000)]
    pub grid_size: usize,
    /// Also estimate the operator 2-norm error by power iteration (slow)
    #[arg(long)]
    pub operator: bool,
    /// Paper-scale grid
    #[arg(long)]
    pub full: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Clock {
    /// e^{-d t^alpha b}
    Fractional,
    /// e^{-d t b}
    Linear,
}

#[derive(Args, Debug)]
pub struct SurvivalArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.8,0.5,0.25")]
    pub alpha: Vec<f64>,
    /// Vertex degrees (attempt rates)
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    pub degree: Vec<usize>,
    #[arg(long, default_value_t = 1e-12)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 61)]
    pub j: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub t_lo: f64,
    #[arg(long, default_value_t = 1e3)]
    pub t_hi: f64,
    #[arg(long, default_value_t = 51)]
    pub t_steps: usize,
    /// Clock inside the SOE exponentials
    #[arg(long, value_enum, default_value_t = Clock::Fractional)]
    pub clock: Clock,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PathsArgs {
    /// [default: --gabriel 120; with --full --gabriel 600]
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.85")]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub epsilon: f64,
    /// SOE node counts; the exact kernel is always included
    #[arg(long, value_delimiter = ',', default_value = "1,10,20,40")]
    pub j: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub t_lo: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub t_hi: f64,
    #[arg(long, default_value_t = 300)]
    pub t_steps: usize,
    #[arg(long, default_value_t = 0)]
    pub src: usize,
    /// [default: the lowest-index vertex farthest from --src in hops]
    #[arg(long)]
    pub dst: Option<usize>,
    /// Larger default graph
    #[arg(long)]
    pub full: bool,
    /// Output directory for paths.csv, edge_usage.csv, geodesics.csv, summary.csv
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct MemoryArgs {
    /// [default: --er 20 40]
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.8")]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub src: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub t_lo: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub t_hi: f64,
    #[arg(long, default_value_t = 10)]
    pub t_steps: usize,
    /// Odd number of subintervals in the memory split
    #[arg(long, default_value_t = 21)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CtrwArgs {
    /// [default: path on 3 vertices]
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 0.02)]
    pub t_lo: f64,
    #[arg(long, default_value_t = 0.5)]
    pub t_hi: f64,
    #[arg(long, default_value_t = 3)]
    pub t_steps: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub src: usize,
    /// [default: the lowest-index vertex farthest from --src in hops]
    #[arg(long)]
    pub dst: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VolterraArgs {
    /// [default: --er 30 90]
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 3)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.8")]
    pub alpha: Vec<f64>,
    /// Laplace variables
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,10")]
    pub s: Vec<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub epsilon: f64,
    #[arg(long, value_delimiter = ',', default_value = "10,80")]
    pub j: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("SUBDIFF_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| commands::usage(format!("SUBDIFF_THREADS = {v:?} must be a positive integer")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    match cli.command {
        Command::GenGraph(a) => commands::gen_graph(&a),
        Command::WindowTable(a) => commands::window_table(&a),
        Command::SoeTable(a) => commands::soe_table(&a),
        Command::ErrorHeatmap(a) => commands::error_heatmap(&a),
        Command::Survival(a) => commands::survival(&a),
        Command::Paths(a) => commands::paths(&a),
        Command::MemoryReport(a) => commands::memory_report(&a),
        Command::Ctrw(a) => commands::ctrw(&a),
        Command::VolterraCheck(a) => commands::volterra_check(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (category, code) = commands::categorize(&e);
            eprintln!("error[{category}]: {e:#}");
            ExitCode::from(code)
        }
    }
}
