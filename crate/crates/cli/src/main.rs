mod commands;
mod config;
mod params;
mod svg;

use clap::{Args, Parser, Subcommand};
use interp_core::graph_ssl::GraphError;
use interp_core::{DatasetError, EstimatorError, HarnessError, NeighborError, SyntheticError};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SyntheticError> for CliError {
    fn from(e: SyntheticError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::InvalidConfig(_)
            | EstimatorError::Neighbors(NeighborError::KTooLarge { .. } | NeighborError::ZeroK)
            | EstimatorError::Neighbors(NeighborError::DimensionMismatch { .. }) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Trial { source, .. } => source.into(),
            HarnessError::Estimator(source) => source.into(),
            HarnessError::InvalidSpec(_) | HarnessError::NonMonotoneLabels | HarnessError::Io(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::SingularSystem(_) | GraphError::NotConverged(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

/// Experiments with interpolating predictors on synthetic data.
#[derive(Parser, Debug)]
#[command(name = "interp", version)]
struct Cli {
    /// Master random seed [default: 1]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads [default: all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// TOML file of option values; command-line flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the main CSV output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a line plot of the result
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct ProblemArgs {
    /// cube:D, ball:D or simplex:D [default: cube:2]
    #[arg(long)]
    pub domain: Option<String>,
    /// constant:P, linear:H or sine:A:W [default: constant:0.2]
    #[arg(long)]
    pub eta: Option<String>,
    /// Gaussian label noise; turns the problem into regression
    #[arg(long)]
    pub noise: Option<f64>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct EstimatorArgs {
    /// simplicial, winn, hilbert or knn [default: winn]
    #[arg(long)]
    pub estimator: Option<String>,
    /// Neighbor count: integer, sqrt, pow:E, rate or rate:ALPHA [default: sqrt]
    #[arg(long)]
    pub k: Option<String>,
    /// power, power:DELTA or neglog [default: power, delta = d/4]
    #[arg(long)]
    pub weight: Option<String>,
    /// Simplicial prediction outside the convex hull [default: 0.5]
    #[arg(long)]
    pub outside: Option<f64>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct ExperimentArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub estimator: EstimatorArgs,
    /// Comma-separated, strictly increasing sample sizes [default: 256,1024,4096]
    #[arg(long)]
    pub n_list: Option<String>,
    /// Trials per sample size [default: 20]
    #[arg(long)]
    pub trials: Option<usize>,
    /// Test points per trial [default: 500]
    #[arg(long)]
    pub test_points: Option<usize>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct GenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    /// Number of examples [default: 100]
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct PredictArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub estimator: EstimatorArgs,
    /// Training CSV with columns x0..x{d-1},y
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Query CSV; every column starting with `x` is a coordinate
    #[arg(long)]
    pub queries: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct RatesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub experiment: ExperimentArgs,
    /// mse, risk or disagreement [default: mse]
    #[arg(long)]
    pub statistic: Option<String>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct AdversarialArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub estimator: EstimatorArgs,
    /// Training set size [default: 5000]
    #[arg(long)]
    pub n: Option<usize>,
    /// Cover radius is 2 * epsilon [default: 0.05]
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Grid cells per axis [default: 50]
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Independent datasets [default: 20]
    #[arg(long)]
    pub repeats: Option<usize>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct SimplexDemoArgs {
    /// Comma-separated dimensions [default: 2,3,4]
    #[arg(long)]
    pub dims: Option<String>,
    /// Uniform samples per dimension [default: 1000000]
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct HullMissArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated sample sizes [default: 100,1000]
    #[arg(long)]
    pub n_list: Option<String>,
    /// Trials per sample size [default: 50]
    #[arg(long)]
    pub trials: Option<usize>,
    /// Fresh points tested per trial [default: 256]
    #[arg(long)]
    pub probes: Option<usize>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct SslArgs {
    /// Edge list, one `i j w` per line
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Labels, one `i y` per line
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Shrinkage parameter, 0 for label propagation [default: 0]
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Vertex count [default: one past the largest index seen]
    #[arg(long)]
    pub vertices: Option<usize>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
pub struct OneDimArgs {
    /// CSV with columns x0,y
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Kernel bandwidth parameter (laplace1d only) [default: 0.001]
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Evenly spaced queries across the data range [default: 201]
    #[arg(long)]
    pub grid: Option<usize>,
    /// Query CSV with column x0; replaces the grid
    #[arg(long)]
    pub queries: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a dataset and write it as CSV
    Gen(GenArgs),
    /// Fit an estimator and predict at query points
    Predict(PredictArgs),
    /// Monte Carlo mean squared error of the estimate of eta
    Mse(ExperimentArgs),
    /// Monte Carlo classification risk and disagreement with the Bayes rule
    Risk(ExperimentArgs),
    /// Run an experiment over sample sizes and fit a log-log slope
    Rates(RatesArgs),
    /// Grid density of points where the classifier disagrees with the Bayes rule
    Adversarial(AdversarialArgs),
    /// Labels (0, ..., 0, 1) on a regular simplex: interpolation vs nearest vertex
    SimplexDemo(SimplexDemoArgs),
    /// Probability that a fresh point falls outside the sample's convex hull
    HullMiss(HullMissArgs),
    /// Laplacian interpolation on a partially labeled graph
    Ssl(SslArgs),
    /// One-dimensional Laplace-kernel interpolant
    Laplace1d(OneDimArgs),
    /// Expected random-threshold stump in one dimension
    Pert1d(OneDimArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = config::load(cli.config.as_deref())?;
    let ctx = commands::Context {
        seed: match cli.seed {
            Some(s) => s,
            None => config::get_u64(&file, "seed")?.unwrap_or(1),
        },
        out: cli.out.or(config::get_str(&file, "out")?.map(PathBuf::from)),
        svg: cli.svg.or(config::get_str(&file, "svg")?.map(PathBuf::from)),
    };
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => config::get_u64(&file, "threads")?.map(|t| t as usize),
    };
    if threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Gen(a) => commands::gen(&ctx, config::merge(a, &file)?),
        Command::Predict(a) => commands::predict(&ctx, config::merge(a, &file)?),
        Command::Mse(a) => commands::mse(&ctx, config::merge(a, &file)?),
        Command::Risk(a) => commands::risk(&ctx, config::merge(a, &file)?),
        Command::Rates(a) => commands::rates(&ctx, config::merge(a, &file)?),
        Command::Adversarial(a) => commands::adversarial(&ctx, config::merge(a, &file)?),
        Command::SimplexDemo(a) => commands::simplex_demo(&ctx, config::merge(a, &file)?),
        Command::HullMiss(a) => commands::hull_miss(&ctx, config::merge(a, &file)?),
        Command::Ssl(a) => commands::ssl(&ctx, config::merge(a, &file)?),
        Command::Laplace1d(a) => commands::laplace1d(&ctx, config::merge(a, &file)?),
        Command::Pert1d(a) => commands::pert1d(&ctx, config::merge(a, &file)?),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
