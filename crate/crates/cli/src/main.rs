//! `trendcheck`: score trendline statements and discover alternatives.
//!
//! Exit codes: 0 success, 1 data or evaluation error, 2 usage error.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use trendcheck_core::Dataset;
use trendcheck_service::request::{BoundsInput, RangeInput, RegionsInput, SamplingInput};
use trendcheck_service::{
    evaluate, EngineConfig, EvaluationRequest, ServiceConfig, Task, ENV_DATASETS,
    ENV_MAX_EXACT_PAIRS, ENV_PORT,
};

#[derive(Debug, Parser)]
#[command(name = "trendcheck", version, about = "Detect cherry-picked trendline statements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Support of a statement: exact, brute-force baseline, and sampled estimates.
    Support(Statement),
    /// Most-supported statement of a given width.
    Mss {
        #[command(flatten)]
        statement: Statement,
        /// Width of the statement range (> 0).
        #[arg(long)]
        width: f64,
    },
    /// Tightest statement reaching a support threshold.
    Tightest {
        #[command(flatten)]
        statement: Statement,
        /// Support threshold in (0, 1].
        #[arg(long)]
        min_support: f64,
    },
    /// Support, most-supported and tightest statements together.
    All {
        #[command(flatten)]
        statement: Statement,
        #[arg(long)]
        width: f64,
        #[arg(long)]
        min_support: f64,
    },
    /// Serve the HTTP API over a directory of CSV datasets.
    Serve {
        #[arg(long, env = ENV_DATASETS)]
        datasets: PathBuf,
        #[arg(long, env = ENV_PORT, default_value_t = 8080)]
        port: u16,
        #[arg(long, env = ENV_MAX_EXACT_PAIRS)]
        max_exact_pairs: Option<u64>,
    },
}

#[derive(Debug, Args)]
struct Statement {
    /// CSV file with a header row.
    #[arg(long)]
    dataset: PathBuf,
    /// Target attribute (the y values).
    #[arg(long)]
    target: String,
    /// Trend attribute (the x axis).
    #[arg(long)]
    trend: String,
    /// Parse the trend attribute as dates (`YYYY-MM-DD[ HH:MM:SS]`, UTC).
    #[arg(long)]
    dates: bool,
    /// Begin support region, `FROM..TO`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    begin: RangeInput,
    /// End support region, `FROM..TO`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    end: RangeInput,
    /// Lower bound on y(e) - y(b); omitted means -inf.
    #[arg(long, allow_hyphen_values = true)]
    lower: Option<f64>,
    /// Upper bound on y(e) - y(b); omitted means +inf.
    #[arg(long, allow_hyphen_values = true)]
    upper: Option<f64>,
    /// Require x(e) - x(b) to equal this window (seconds for dates).
    #[arg(long)]
    window: Option<f64>,
    /// Use only the first N rows.
    #[arg(long)]
    rows: Option<usize>,
    /// Sampling budgets, comma-separated.
    #[arg(long, value_delimiter = ',')]
    budgets: Option<Vec<u64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Print the JSON payload the HTTP service would return.
    #[arg(long)]
    json: bool,
    /// Pair count above which the baseline is skipped and discovery samples.
    #[arg(long, env = ENV_MAX_EXACT_PAIRS)]
    max_exact_pairs: Option<u64>,
}

fn parse_range(raw: &str) -> Result<RangeInput, String> {
    match raw.split_once("..") {
        Some((from, to)) if !from.trim().is_empty() && !to.trim().is_empty() => Ok(RangeInput {
            from: from.trim().to_string(),
            to: to.trim().to_string(),
        }),
        _ => Err(format!("expected FROM..TO, got {raw:?}")),
    }
}

impl Statement {
    fn request(&self, dataset_id: &str, task: Task, width: Option<f64>, tau: Option<f64>) -> EvaluationRequest {
        EvaluationRequest {
            dataset_id: dataset_id.to_string(),
            task,
            target_column: self.target.clone(),
            trend_column: self.trend.clone(),
            trend_is_date: self.dates,
            bounds: BoundsInput {
                lower: self.lower,
                upper: self.upper,
            },
            regions: RegionsInput {
                begin: self.begin.clone(),
                end: self.end.clone(),
            },
            window: self.window,
            row_limit: self.rows,
            sampling: SamplingInput {
                budgets: self.budgets.clone(),
                seed: self.seed,
            },
            mss_width: width,
            tightest_support: tau,
        }
    }
}

fn run_statement(statement: &Statement, task: Task, width: Option<f64>, tau: Option<f64>) -> anyhow::Result<()> {
    let dataset = Dataset::from_path(&statement.dataset)
        .with_context(|| format!("loading {}", statement.dataset.display()))?;
    let request = statement.request(dataset.id(), task, width, tau);
    let engine = statement
        .max_exact_pairs
        .map(|max_exact_pairs| EngineConfig { max_exact_pairs })
        .unwrap_or_default();
    let response = evaluate(&dataset, &request, &engine)?;
    if statement.json {
        println!("{}", serde_json::to_string(&response)?);
    } else {
        print!("{}", output::render(&dataset, &response));
    }
    Ok(())
}

fn run_serve(datasets: PathBuf, port: u16, max_exact_pairs: Option<u64>) -> anyhow::Result<()> {
    if !datasets.is_dir() {
        bail!("dataset directory {} does not exist", datasets.display());
    }
    let mut config = ServiceConfig {
        port,
        datasets,
        ..ServiceConfig::default()
    };
    if let Some(max) = max_exact_pairs {
        config.engine.max_exact_pairs = max;
    }
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        tokio::select! {
            res = trendcheck_service::serve(config) => res.context("service failed"),
            _ = tokio::signal::ctrl_c() => {
                tracing::info!("interrupted, shutting down");
                Ok(())
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();

    let result = match &cli.command {
        Command::Support(s) => run_statement(s, Task::Support, None, None),
        Command::Mss { statement, width } => run_statement(statement, Task::Mss, Some(*width), None),
        Command::Tightest {
            statement,
            min_support,
        } => run_statement(statement, Task::Tightest, None, Some(*min_support)),
        Command::All {
            statement,
            width,
            min_support,
        } => run_statement(statement, Task::All, Some(*width), Some(*min_support)),
        Command::Serve {
            datasets,
            port,
            max_exact_pairs,
        } => run_serve(datasets.clone(), *port, *max_exact_pairs),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
