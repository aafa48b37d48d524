mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use denseflow::FlowError;

/// Classical dense and sparse optical flow.
#[derive(Debug, Parser)]
#[command(name = "denseflow", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate flow between two frames.
    Estimate(EstimateArgs),
    /// Compare an estimated .flo against ground truth.
    Evaluate(EvaluateArgs),
    /// Render a .flo file with the color wheel.
    Visualize(VisualizeArgs),
    /// Dump every Gaussian pyramid level as a PNG.
    Pyramid(PyramidArgs),
    /// Write a synthetic frame pair and its ground truth.
    Synth(SynthArgs),
    /// Run HS and MR-HS over Sintel-style scenes and print a CSV table.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lk,
    Hs,
    Mrhs,
}

#[derive(Debug, Clone, Args)]
struct HsArgs {
    /// Smoothness weight.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Iteration cap per solve (per level for mrhs).
    #[arg(long = "max-iter", default_value_t = 5000)]
    max_iter: usize,
    /// Stop when the L2 norm of the flow update falls below this.
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    /// Guard added to the update denominator.
    #[arg(long, default_value_t = 1e-8)]
    epsilon: f64,
}

impl HsArgs {
    fn params(&self) -> denseflow::HsParams {
        denseflow::HsParams {
            alpha: self.alpha,
            epsilon: self.epsilon,
            max_iterations: self.max_iter,
            convergence_threshold: self.tol,
        }
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    frame1: PathBuf,
    frame2: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Hs)]
    method: Method,
    #[command(flatten)]
    hs: HsArgs,
    /// Pyramid depth for mrhs.
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Output path: .flo for hs/mrhs, CSV for lk (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write a color-wheel PNG of the dense flow.
    #[arg(long)]
    viz: Option<PathBuf>,
    /// LK window radius.
    #[arg(long, default_value_t = 2)]
    radius: usize,
    /// LK acceptance threshold on the smaller tensor eigenvalue.
    #[arg(long = "min-eig", default_value_t = 1e-4)]
    min_eig: f64,
    /// LK sampling stride in pixels.
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// Flat key = value file of flags; explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    estimate: PathBuf,
    ground_truth: PathBuf,
    /// Exclude pixels flagged unknown in either file.
    #[arg(long)]
    mask: bool,
    /// Append `scene,frame,method,aae_deg,epe_px` to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Scene label for the CSV row (default: ground-truth file stem).
    #[arg(long)]
    scene: Option<String>,
    #[arg(long, default_value = "")]
    frame: String,
    /// Method label for the CSV row.
    #[arg(long, default_value = "")]
    method: String,
}

#[derive(Debug, Args)]
struct VisualizeArgs {
    flow: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Magnitude mapped to full saturation (default: 99th percentile).
    #[arg(long = "max-magnitude")]
    max_magnitude: Option<f64>,
}

#[derive(Debug, Args)]
struct PyramidArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Translation,
    Rotation,
    Zoom,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, value_enum, default_value_t = Kind::Translation)]
    kind: Kind,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    dx: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    dy: f64,
    /// Rotation about the image centre.
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    degrees: f64,
    /// Zoom about the image centre.
    #[arg(long, default_value_t = 1.05)]
    factor: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    width: usize,
    #[arg(long, default_value_t = 64)]
    height: usize,
    /// Receives frame1.png, frame2.png and gt.flo.
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    /// Dataset root (Sintel layout).
    root: PathBuf,
    /// Comma-separated `name:frame:levels` entries.
    #[arg(long, default_value = "alley_1:1:4,bamboo_2:28:4,market_2:41:3,mountain_1:35:4")]
    scenes: String,
    /// Comma-separated subset of `hs,mrhs`.
    #[arg(long, default_value = "hs,mrhs")]
    methods: String,
    #[arg(long, default_value = "final")]
    pass: String,
    #[command(flatten)]
    hs: HsArgs,
    /// Write the table here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Flow(FlowError),
    Usage(String),
    Partial(String),
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        CliError::Flow(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Flow(FlowError::NumericalInstability { .. }) => 2,
            CliError::Partial(_) => 3,
            _ => 1,
        }
    }

    fn line(&self) -> String {
        let msg = match self {
            CliError::Flow(e) => e.to_string(),
            CliError::Usage(m) | CliError::Partial(m) => m.clone(),
        };
        msg.split_whitespace().collect::<Vec<_>>().join(" ")
    }
}

fn fail(err: CliError) -> ExitCode {
    eprintln!("denseflow: {}", err.line());
    ExitCode::from(err.code())
}

fn main() -> ExitCode {
    let args = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(m) => return fail(CliError::Usage(m)),
    };
    let cli = match Cli::command().try_get_matches_from(args).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            return fail(CliError::Usage(format!("parameter error: {first}")));
        }
    };
    let result = match cli.command {
        Command::Estimate(a) => commands::estimate(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Visualize(a) => commands::visualize(a),
        Command::Pyramid(a) => commands::pyramid(a),
        Command::Synth(a) => commands::synth(a),
        Command::Benchmark(a) => commands::benchmark(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}
