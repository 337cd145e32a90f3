use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qso_core::dynamics::{DEFAULT_BUDGET, DEFAULT_TOL};

#[derive(Debug, Parser)]
#[command(
    name = "qso",
    version,
    about = "Orbits, fixed points and 2-cycles of a piecewise quadratic operator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate one start and report its terminal behavior
    Simulate(SimulateArgs),
    /// Print the regime, fixed-point set, trapping sets and stability
    Classify(ClassifyArgs),
    /// Solve for 2-cycles straddling a discontinuity
    Cycle(CycleArgs),
    /// Run the numerical check suites
    Verify(VerifyArgs),
    /// Classify behavior over a grid of coefficients
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Coefficients {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub coefficients: Coefficients,
    /// Initial frequency of the first species
    #[arg(long, allow_hyphen_values = true)]
    pub x0: f64,
    /// Write exactly the first N+1 iterates instead of the detection trace
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = DEFAULT_TOL, allow_hyphen_values = true)]
    pub tol: f64,
    /// Trajectory file; without it the trajectory goes to stdout and the
    /// summary to stderr
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write `k,x,fx` rows for cobweb plots
    #[arg(long)]
    pub cobweb: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub coefficients: Coefficients,
    /// `csv` prints the text report
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Work around 2/3 with coefficients (b, c) instead of 1/3 with (a, b)
    #[arg(long)]
    pub mirror: bool,
    /// Append the brute-force search result
    #[arg(long)]
    pub oracle: bool,
    /// Grid size of the brute-force search
    #[arg(long, default_value_t = 100_000)]
    pub grid: usize,
    /// Scan a RES x RES grid of (b, c) for 2-cycles around 2/3 and write
    /// `b,c,found,x1,x2` rows
    #[arg(long, value_name = "RES")]
    pub mirror_scan: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run one group only: uniform, 2.1 ... 2.7, pt
    #[arg(long)]
    pub theorem: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Pin a coefficient, e.g. `c=0.5`
    #[arg(long = "fix", value_name = "K=V")]
    pub fixes: Vec<String>,
    /// Vary a coefficient over N points, e.g. `a:0:1:101`
    #[arg(long = "axis", value_name = "K:LO:HI:N")]
    pub axes: Vec<String>,
    /// Start points; defaults to 0.1,0.2,0.45,0.55,0.8,0.9
    #[arg(long = "x0", value_delimiter = ',')]
    pub starts: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = DEFAULT_TOL, allow_hyphen_values = true)]
    pub tol: f64,
    /// Add closed-form 2-cycle columns
    #[arg(long)]
    pub cycles: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
