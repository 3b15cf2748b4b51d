use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use findim::approximation::ConvergenceOptions;
use findim::generators::Family;
use findim::Norm;
use findim_cli::commands::{self, Format};
use findim_cli::io::LoadOptions;
use findim_cli::report::AnalyzeOptions;
use findim_cli::{exit, CliError};

/// Exact finite Hausdorff and box-counting dimensions of finite metric spaces.
#[derive(Parser)]
#[command(name = "findim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct MetricArgs {
    /// l1, l2, linf or lp:<p>; overrides the metric named in a JSON file.
    #[arg(long)]
    metric: Option<Norm>,
    /// Absolute tolerance for distance comparisons.
    #[arg(long)]
    tol: Option<f64>,
    /// Reject inputs or transforms that break the triangle inequality.
    #[arg(long)]
    strict_metric: bool,
}

impl From<MetricArgs> for LoadOptions {
    fn from(a: MetricArgs) -> Self {
        LoadOptions { metric: a.metric, tolerance: a.tol, strict_metric: a.strict_metric }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a point cloud or distance matrix ("-" reads stdin).
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
        /// Cross-check against the brute-force oracle (at most 10 points).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = findim::cover::DEFAULT_MAX_EXACT)]
        max_exact: usize,
        #[arg(long, default_value = "json")]
        format: Format,
        /// Omit wall-clock timings so reports are reproducible.
        #[arg(long)]
        no_timing: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Generate a member of a named family.
    Generate {
        family: Family,
        level: u32,
        /// Family parameter (spacing for linear, epsilon for triangle, distance for double).
        #[arg(long)]
        param: Option<f64>,
        #[arg(long)]
        format: Option<Format>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Convergence table for a fractal family over a level range such as 2..5.
    Converge {
        family: Family,
        levels: String,
        /// Use cube-grid approximations instead of the construction levels.
        #[arg(long)]
        grid: bool,
        #[arg(long, default_value_t = findim::cover::DEFAULT_MAX_EXACT)]
        max_exact: usize,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Apply d' = r * d^beta and write the resulting distance matrix.
    Transform {
        input: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn read_input(path: &PathBuf) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(CliError::from).with_context(|| format!("reading {}", path.display()))
}

fn write_output(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Analyze { input, metric, oracle, max_exact, format, no_timing, out } => {
            let text = read_input(&input)?;
            let opts = AnalyzeOptions { max_exact, oracle, timing: !no_timing };
            let result = commands::cmd_analyze(&text, metric.into(), opts, format);
            if let Err(CliError::OracleMismatch(report)) = &result {
                eprintln!("{}", serde_json::to_string_pretty(&report.oracle)?);
            }
            write_output(out.as_ref(), &result?)
        }
        Command::Generate { family, level, param, format, out } => {
            write_output(out.as_ref(), &commands::cmd_generate(family, level, param, format)?)
        }
        Command::Converge { family, levels, grid, max_exact, format, out } => {
            let levels = commands::parse_levels(&levels)?;
            let opts = ConvergenceOptions { max_exact, ..Default::default() };
            write_output(out.as_ref(), &commands::cmd_converge(family, levels, grid, opts, format)?)
        }
        Command::Transform { input, r, beta, metric, format, out } => {
            let text = read_input(&input)?;
            write_output(out.as_ref(), &commands::cmd_transform(&text, metric.into(), r, beta, format)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.chain().find_map(|c| c.downcast_ref::<CliError>()).map_or(exit::OTHER, CliError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
