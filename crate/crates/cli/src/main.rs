use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mpanf_core::config::{parse_drift_mode, parse_methods};
use mpanf_core::montecarlo::{DEFAULT_SEED, DEFAULT_STEPS, DEFAULT_TRIALS};
use mpanf_core::{
    emit_report, emit_stats, run_experiment, run_montecarlo, run_stats, ExperimentConfig,
    ReportFormat,
};

/// Movement-prediction-adjusted naive forecasting: backtests, summary
/// statistics and Monte Carlo validation.
#[derive(Parser)]
#[command(name = "mpanf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the rolling backtest for every configured series and write all tables.
    Run(Common),
    /// Monte Carlo check of the closed-form in-sample gain over a grid of accuracies.
    Mc(McArgs),
    /// Write the per-series summary statistics only.
    Stats(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `csv` or `markdown`.
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: ReportFormat,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated subset of naive,drift,ima11,linreg,mpanf.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    truncate_length: Option<usize>,
    #[arg(long)]
    split_fraction: Option<f64>,
    #[arg(long)]
    date_column: Option<String>,
    /// `fixed` or `rolling`.
    #[arg(long)]
    drift: Option<String>,
    #[arg(long)]
    linreg_intercept: Option<bool>,
}

#[derive(Args)]
struct McArgs {
    /// Optional config supplying `mc_*` defaults and the output directory.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// `csv` or `markdown`.
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: ReportFormat,
    #[arg(long)]
    seed: Option<u64>,
    /// Steps per simulated walk.
    #[arg(long = "mc-steps", visible_alias = "n")]
    mc_steps: Option<usize>,
    /// Comma-separated accuracies in (0, 1).
    #[arg(long = "mc-p-grid", visible_alias = "p-grid", value_delimiter = ',')]
    mc_p_grid: Option<Vec<f64>>,
    #[arg(long = "mc-trials", visible_alias = "trials")]
    mc_trials: Option<usize>,
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: mpanf_core::Error| e.to_string())
}

fn load_config(args: &Common) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::from_file(&args.config)
        .with_context(|| format!("reading config {}", args.config.display()))?;
    if let Some(out) = &args.out {
        config.output_dir = out.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(m) = &args.methods {
        config.methods = parse_methods(m)?;
    }
    if let Some(n) = args.truncate_length {
        config.truncate_length = n;
    }
    if let Some(f) = args.split_fraction {
        config.split_fraction = f;
    }
    if let Some(c) = &args.date_column {
        config.date_column = c.clone();
    }
    if let Some(d) = &args.drift {
        config.fit.drift_mode = parse_drift_mode(d)?;
    }
    if let Some(i) = args.linreg_intercept {
        config.fit.linreg_intercept = i;
    }
    config.validate()?;
    Ok(config)
}

fn report_written(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn run(args: &Common) -> Result<bool> {
    let config = load_config(args)?;
    let report = run_experiment(&config)?;
    let files = emit_report(&report, &config.output_dir, args.format)?;
    report_written(&files);
    for (name, error) in report.failures() {
        eprintln!("series {name} failed: {error}");
    }
    Ok(!report.has_failures())
}

fn stats(args: &Common) -> Result<bool> {
    let config = load_config(args)?;
    let report = run_stats(&config)?;
    let files = emit_stats(&report, &config.output_dir, args.format)?;
    report_written(&files);
    let mut ok = true;
    for (name, error) in report.series.iter().filter_map(|s| s.as_ref().err()) {
        eprintln!("series {name} failed: {error}");
        ok = false;
    }
    Ok(ok)
}

fn mc(args: &McArgs) -> Result<bool> {
    let base = match &args.config {
        Some(path) => Some(
            ExperimentConfig::from_file(path).with_context(|| format!("reading config {}", path.display()))?,
        ),
        None => None,
    };
    let n = args.mc_steps.or(base.as_ref().map(|c| c.mc_steps)).unwrap_or(DEFAULT_STEPS);
    let trials = args.mc_trials.or(base.as_ref().map(|c| c.mc_trials)).unwrap_or(DEFAULT_TRIALS);
    let seed = args.seed.or(base.as_ref().map(|c| c.seed)).unwrap_or(DEFAULT_SEED);
    let p_grid = match (&args.mc_p_grid, &base) {
        (Some(g), _) => g.clone(),
        (None, Some(c)) => c.mc_p_grid.clone(),
        (None, None) => vec![0.5, 0.55, 0.6, 0.7, 0.8, 0.9],
    };
    if p_grid.is_empty() {
        bail!("the accuracy grid is empty");
    }
    let out = args
        .out
        .clone()
        .or(base.map(|c| c.output_dir))
        .unwrap_or_else(|| Path::new("out").to_path_buf());
    let reports = run_montecarlo(n, &p_grid, trials, seed, &out, args.format)?;
    for r in &reports {
        log::info!(
            "p = {}: predicted {:.6}, empirical {:.6}",
            r.p,
            r.predicted_delta_mse_in,
            r.empirical_delta_mse_in
        );
    }
    println!("wrote {}", out.join("montecarlo.csv").display());
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(a) => run(a),
        Command::Stats(a) => stats(a),
        Command::Mc(a) => mc(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
