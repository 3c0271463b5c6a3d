use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "siteplan", version, about = "Place new base stations at interference minima and measure the gain")]
pub struct Cli {
    /// Cap on worker threads (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a Poisson station field from a scenario config
    Generate(GenerateArgs),
    /// Choose new sites with heuristic 1 or 2
    Plan(PlanArgs),
    /// Coverage and capacity report, with a comparison when plans are given
    Evaluate(EvaluateArgs),
    /// Draw stations, triangulation, candidates and coverage as SVG
    Render(RenderArgs),
    /// Run the reference experiment end to end for one seed
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GenerateArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Overrides the config seed
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}

/// Model parameters; flags win over the config file, which wins over the
/// built-in defaults.
#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "x0,y0,x1,y1", allow_hyphen_values = true)]
    pub roi: Option<String>,
    #[arg(long, value_name = "F", allow_hyphen_values = true)]
    pub alpha: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct DescentArgs {
    /// Initial step length
    #[arg(long, value_name = "F", allow_hyphen_values = true)]
    pub step_dt: Option<f64>,
    #[arg(long, value_name = "N")]
    pub max_iters: Option<usize>,
    #[arg(long, value_name = "F", allow_hyphen_values = true)]
    pub grad_tol: Option<f64>,
    #[arg(long, value_name = "F", allow_hyphen_values = true)]
    pub move_tol: Option<f64>,
    #[arg(long, value_name = "F", allow_hyphen_values = true)]
    pub shrink_factor: Option<f64>,
    /// Start only from the centroid
    #[arg(long)]
    pub no_multistart: bool,
}

#[derive(Args, Debug, Clone)]
pub struct PlanArgs {
    #[arg(long, value_name = "PATH")]
    pub stations: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of stations to add
    #[arg(long, value_name = "N")]
    pub k: Option<usize>,
    #[arg(long, value_name = "1|2", value_parser = clap::value_parser!(u8).range(1..=2))]
    pub heuristic: u8,
    #[command(flatten)]
    pub descent: DescentArgs,
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct EvaluateArgs {
    #[arg(long, value_name = "PATH")]
    pub stations: PathBuf,
    /// Plan file; repeat to compare several
    #[arg(long, value_name = "PATH")]
    pub plan: Vec<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_name = "F", allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Grid samples per axis
    #[arg(long, value_name = "N")]
    pub resolution: Option<usize>,
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct RenderArgs {
    #[arg(long, value_name = "PATH")]
    pub stations: PathBuf,
    /// Plan file; one image per plan
    #[arg(long, value_name = "PATH")]
    pub plan: Vec<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_name = "F", allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Comma-separated: reception, triangulation, descent, candidates, roi, stations, added
    #[arg(long, value_name = "LIST")]
    pub layers: String,
    /// Raster cells per axis for the reception layer
    #[arg(long, value_name = "N")]
    pub resolution: Option<usize>,
    #[command(flatten)]
    pub descent: DescentArgs,
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct ReproduceArgs {
    #[arg(long, value_name = "U64", default_value_t = 1)]
    pub seed: u64,
    /// Metrics grid samples per axis (default 500)
    #[arg(long, value_name = "N")]
    pub resolution: Option<usize>,
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}
