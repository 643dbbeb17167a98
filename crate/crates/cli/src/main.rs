//! `lossnet`: perfect sampling, clan statistics, critical-rate bounds and
//! the Monte Carlo studies of the one-dimensional loss network.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use lossnet_core::backward::DEFAULT_CAP;
use lossnet_core::experiments::{
    estimate_lambda_c, lambda_grid_sweep, parse_grid, simulate_branching_total, simulate_colored_branching,
    simulate_point_branching_total, SweepMetadata, SweepTable, DEFAULT_DEGREE,
};
use lossnet_core::streams::{stream, GENERATOR_NAME};
use lossnet_core::{
    build_clan, perfect_sample, CriticalBounds, Error, LengthDistribution, ModelParams, SampleRecord, Window,
};
use serde::Serialize;

use config::{require, Config, UsageError};

const BRANCHING_CAP: usize = 100_000;
const DEFAULT_GENERATIONS: u32 = 6;

#[derive(Parser, Debug)]
#[command(name = "lossnet", version, about = "Perfect sampling for the one-dimensional loss network")]
struct Cli {
    /// JSON file supplying defaults for any option below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for replications. Results do not depend on it.
    #[arg(long, global = true, env = "LOSSNET_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// Length law: uniform01 | pointmass:D | beta:A:B | discrete:V:P,...
    #[arg(long, value_parser = parse_pi)]
    pi: Option<LengthDistribution>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a perfect sample of the stationary network on a window.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
        window: Option<Vec<f64>>,
        #[arg(long)]
        capacity: Option<u32>,
        /// Bound on sampled rectangles.
        #[arg(long)]
        cap: Option<usize>,
        /// Write the sample here instead of standard output.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build one clan and report its size.
    Clan {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "window")]
        point: Option<f64>,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
        window: Option<Vec<f64>>,
        #[arg(long)]
        cap: Option<usize>,
        /// Write every clan member and ancestor edge to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Closed-form critical rates for a length law.
    Bounds {
        #[arg(long, value_parser = parse_pi)]
        pi: Option<LengthDistribution>,
    },
    /// Mean point-clan size over a grid of rates.
    Sweep {
        #[arg(long, value_parser = parse_pi)]
        pi: Option<LengthDistribution>,
        /// a:b:step
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output table; run metadata goes to `<csv>.meta.json`.
        #[arg(long)]
        csv: PathBuf,
    },
    /// Critical rate from a sweep table.
    EstimateCritical {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Dominating branching process statistics.
    Branching {
        #[command(flatten)]
        model: ModelArgs,
        /// Run the two-colour process instead.
        #[arg(long)]
        colored: bool,
        #[arg(long)]
        reps: Option<usize>,
        /// Start from one individual of this length instead of the calls
        /// covering a point.
        #[arg(long, conflicts_with = "colored")]
        root_type: Option<f64>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        generations: Option<u32>,
    },
}

fn parse_pi(s: &str) -> Result<LengthDistribution, String> {
    LengthDistribution::parse_spec(s).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ClanReport<'a> {
    lambda: f64,
    pi: &'a LengthDistribution,
    seed: u64,
    cap: usize,
    window: (f64, f64),
    status: lossnet_core::ClanStatus,
    size: usize,
    generations: u32,
    generation_sizes: Vec<usize>,
    sampled: usize,
    explored_area: f64,
}

#[derive(Serialize)]
struct ClanDumpFile<'a> {
    lambda: f64,
    pi: &'a LengthDistribution,
    seed: u64,
    cap: usize,
    window: (f64, f64),
    #[serde(flatten)]
    dump: lossnet_core::backward::ClanDump,
}

#[derive(Serialize)]
struct BoundsReport {
    pi: LengthDistribution,
    #[serde(flatten)]
    bounds: CriticalBounds,
}

#[derive(Serialize)]
struct BranchingReport<'a, T: Serialize> {
    process: &'static str,
    lambda: f64,
    pi: &'a LengthDistribution,
    seed: u64,
    reps: usize,
    generator: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    root_type: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generations: Option<u32>,
    result: T,
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn window_from(flag: Option<Vec<f64>>, config: Option<(f64, f64)>) -> anyhow::Result<Window> {
    let (a, b) = require(flag.map(|v| (v[0], v[1])), config, "window")?;
    Ok(Window::new(a, b)?)
}

fn model(args: &ModelArgs, cfg: &Config, capacity: Option<u32>) -> anyhow::Result<(ModelParams, u64)> {
    let pi = require(args.pi.clone(), cfg.pi.clone(), "pi")?;
    let lambda = require(args.lambda, cfg.lambda, "lambda")?;
    let capacity = capacity.or(cfg.capacity).unwrap_or(1);
    let seed = require(args.seed, cfg.seed, "seed")?;
    Ok((ModelParams::new(lambda, capacity, pi)?, seed))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(n) = cli.threads.or(cfg.threads) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }

    match cli.command {
        Command::Sample { model: m, window, capacity, cap, json } => {
            let (params, seed) = model(&m, &cfg, capacity)?;
            let window = window_from(window, cfg.window)?;
            let cap = cap.or(cfg.cap).unwrap_or(DEFAULT_CAP);
            let sample = perfect_sample(window, &params, seed, 0, cap)?;
            let record = SampleRecord::new(window, &params, seed, &sample);
            emit(&to_json(&record)?, json.as_deref())?;
        }
        Command::Clan { model: m, point, window, cap, dump } => {
            let (params, seed) = model(&m, &cfg, None)?;
            let window = match (point.or(cfg.point), window) {
                (_, Some(w)) => window_from(Some(w), None)?,
                (Some(x), None) => Window::point(x)?,
                (None, None) => window_from(None, cfg.window)?,
            };
            let cap = cap.or(cfg.cap).unwrap_or(DEFAULT_CAP);
            let clan = build_clan(window, &params, &mut stream(seed, 0), cap);
            let report = ClanReport {
                lambda: params.lambda(),
                pi: params.pi(),
                seed,
                cap,
                window: (window.a, window.b),
                status: clan.status,
                size: clan.len(),
                generations: clan.generations(),
                generation_sizes: clan.generation_sizes(),
                sampled: clan.sampled,
                explored_area: clan.explored_area(),
            };
            if let Some(path) = dump {
                let file = ClanDumpFile {
                    lambda: params.lambda(),
                    pi: params.pi(),
                    seed,
                    cap,
                    window: (window.a, window.b),
                    dump: clan.dump(),
                };
                emit(&to_json(&file)?, Some(&path))?;
            }
            emit(&to_json(&report)?, None)?;
        }
        Command::Bounds { pi } => {
            let pi = require(pi, cfg.pi.clone(), "pi")?;
            let bounds = CriticalBounds::for_distribution(&pi);
            emit(&to_json(&BoundsReport { pi, bounds })?, None)?;
        }
        Command::Sweep { pi, grid, reps, cap, seed, csv } => {
            let pi = require(pi, cfg.pi.clone(), "pi")?;
            let grid = parse_grid(&require(grid, cfg.grid.clone(), "grid")?)?;
            let reps = require(reps, cfg.reps, "reps")?;
            let cap = cap.or(cfg.cap).unwrap_or(DEFAULT_CAP);
            let seed = require(seed, cfg.seed, "seed")?;
            let base = ModelParams::new(grid[0], 1, pi.clone())?;
            let table = lambda_grid_sweep(&base, &grid, reps, cap, seed)?;
            emit(&table.to_csv(), Some(&csv))?;
            let meta = SweepMetadata::new(&pi, &grid, reps, cap, seed);
            emit(&to_json(&meta)?, Some(&sidecar_path(&csv)))?;
        }
        Command::EstimateCritical { csv, degree } => {
            let text = std::fs::read_to_string(&csv).with_context(|| format!("reading {}", csv.display()))?;
            let table = SweepTable::from_csv(&text)?;
            let degree = degree.or(cfg.degree).unwrap_or(DEFAULT_DEGREE);
            let estimate = estimate_lambda_c(&table, degree)?;
            emit(&to_json(&estimate)?, None)?;
        }
        Command::Branching { model: m, colored, reps, root_type, cap, generations } => {
            let (params, seed) = model(&m, &cfg, None)?;
            let reps = require(reps, cfg.reps, "reps")?;
            let text = if colored {
                let generations = generations.or(cfg.generations).unwrap_or(DEFAULT_GENERATIONS);
                let stats = simulate_colored_branching(&params, generations, reps, seed)?;
                to_json(&BranchingReport {
                    process: "colored",
                    lambda: params.lambda(),
                    pi: params.pi(),
                    seed,
                    reps,
                    generator: GENERATOR_NAME,
                    cap: None,
                    root_type: None,
                    generations: Some(generations),
                    result: stats,
                })?
            } else {
                let cap = cap.or(cfg.cap).unwrap_or(BRANCHING_CAP);
                if reps == 0 {
                    return Err(UsageError("--reps must be >= 1".into()).into());
                }
                let estimate = match root_type {
                    Some(u) => simulate_branching_total(&params, u, reps, cap, seed),
                    None => simulate_point_branching_total(&params, reps, cap, seed),
                };
                to_json(&BranchingReport {
                    process: if root_type.is_some() { "single_root" } else { "point" },
                    lambda: params.lambda(),
                    pi: params.pi(),
                    seed,
                    reps,
                    generator: GENERATOR_NAME,
                    cap: Some(cap),
                    root_type,
                    generations: None,
                    result: estimate,
                })?
            };
            emit(&text, None)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sidecar_path(csv: &Path) -> PathBuf {
    let mut name = csv.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<UsageError>() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Capped { .. } | Error::AllCapped { .. }) => 3,
        Some(
            Error::InvalidDistribution(_)
            | Error::InvalidParams(_)
            | Error::InvalidWindow { .. }
            | Error::MomentDomain { .. }
            | Error::InvalidArgument(_)
            | Error::InvalidFit(_),
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with status 2 on malformed arguments.
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&UsageError("x".into()).into()), 2);
        assert_eq!(exit_code(&Error::Capped { sampled: 1 }.into()), 3);
        assert_eq!(exit_code(&Error::InvalidWindow { a: 1.0, b: 0.0 }.into()), 2);
        assert_eq!(exit_code(&Error::NoDivergence.into()), 1);
    }

    #[test]
    fn sidecar_sits_next_to_the_table() {
        assert_eq!(sidecar_path(Path::new("out/t.csv")), PathBuf::from("out/t.csv.meta.json"));
    }
}
