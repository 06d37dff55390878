use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fif", version, about = "Fractal interpolation fitting of 1-D series")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Output path (a directory for `gen`, a file otherwise)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for the random-walk generator
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Recursion depth for fractal evaluation (default: model-dependent)
    #[arg(long, global = true)]
    pub depth: Option<usize>,

    /// Largest admissible |d_i|
    #[arg(long = "d-max", global = true, default_value_t = fif_core::collage::DEFAULT_D_MAX)]
    pub d_max: f64,

    /// Fail with exit code 1 when a fit clamps or degenerates
    #[arg(long, global = true)]
    pub strict: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a series (raw and normalized CSV plus normalization sidecar)
    Gen(GenArgs),
    /// Fit a fractal or quadratic model to a series
    Fit(FitArgs),
    /// Evaluate a model on a grid or at the abscissae of a series
    Eval(EvalArgs),
    /// Fit both models and compare their RMS errors
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataKind {
    Polynomial,
    Dna,
    RandomWalk,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: DataKind,

    /// Number of samples (polynomial, random-walk)
    #[arg(long, default_value_t = 10_000)]
    pub m: usize,

    /// Plain-text or FASTA sequence (dna)
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Fractal,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KnotsMode {
    Manual,
    Extrema,
}

#[derive(Debug, Clone, Args)]
pub struct KnotArgs {
    /// Interior knots as 1-based sample indices, e.g. 500,4000,7500
    #[arg(long, value_delimiter = ',')]
    pub knots: Option<Vec<usize>>,

    #[arg(long = "knots-mode", value_enum, default_value_t = KnotsMode::Manual)]
    pub knots_mode: KnotsMode,

    /// Number of segments N for extrema mode (N - 1 interior extrema)
    #[arg(long)]
    pub n: Option<usize>,

    /// Moving-average window for extrema mode
    #[arg(long, default_value_t = fif_core::datasets::DEFAULT_WINDOW)]
    pub window: usize,

    /// Minimum prominence for extrema mode
    #[arg(long, default_value_t = fif_core::datasets::DEFAULT_PROMINENCE)]
    pub prominence: f64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, value_enum, default_value_t = Method::Fractal)]
    pub method: Method,

    /// Series CSV
    #[arg(long)]
    pub series: PathBuf,

    #[command(flatten)]
    pub knots: KnotArgs,

    /// Normalize the series before fitting
    #[arg(long)]
    pub normalize: bool,

    /// Where to write the fit report (JSON)
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Model JSON written by `fit`
    #[arg(long)]
    pub model: PathBuf,

    /// Number of equally spaced evaluation points over the model domain
    #[arg(long, conflicts_with = "at", required_unless_present = "at")]
    pub grid: Option<usize>,

    /// Evaluate at the abscissae of this series CSV
    #[arg(long)]
    pub at: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Series CSV
    #[arg(long, required_unless_present = "all_examples")]
    pub series: Option<PathBuf>,

    #[command(flatten)]
    pub knots: KnotArgs,

    #[arg(long)]
    pub normalize: bool,

    /// Row label
    #[arg(long)]
    pub name: Option<String>,

    /// Run the built-in pipelines (polynomial, seeded random walk)
    #[arg(long, conflicts_with = "series")]
    pub all_examples: bool,
}
