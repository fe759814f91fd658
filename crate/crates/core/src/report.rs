//! Table and plot-data emission.
//!
//! Display tables round to 4 decimals (prices in the summary table to 2).
//! Every number also lands unrounded in a `*_full.csv` companion using the
//! shortest round-trip formatting, so outputs are byte-stable across runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiment::{ExperimentReport, SeriesOutcome, SeriesStats, StatsReport};
use crate::metrics::EvalReport;
use crate::montecarlo::{monte_carlo_validate, McReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::InvalidConfig(format!("unknown format `{other}`"))),
        }
    }
}

/// A rectangular table of already-formatted cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(&self.headers).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("| {} |\n", self.headers.join(" | "));
        out.push_str(&format!("|{}\n", "---|".repeat(self.headers.len())));
        for row in &self.rows {
            out.push_str(&format!("| {} |\n", row.join(" | ")));
        }
        out
    }
}

fn d4(v: f64) -> String {
    format!("{v:.4}")
}

fn d2(v: f64) -> String {
    format!("{v:.2}")
}

fn full(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>, f: fn(f64) -> String) -> String {
    v.map(f).unwrap_or_else(|| "--".into())
}

const FAILED: &str = "failed";

fn stats_row(s: &SeriesStats, fmt_price: fn(f64) -> String, fmt_ratio: fn(f64) -> String) -> Vec<String> {
    vec![
        s.name.clone(),
        s.count.to_string(),
        fmt_price(s.min),
        fmt_price(s.median),
        fmt_price(s.max),
        opt(s.acc_in, fmt_ratio),
        opt(s.eps_bar_in, fmt_ratio),
    ]
}

const STATS_HEADERS: [&str; 7] = ["series", "count", "min", "median", "max", "acc_in", "eps_bar_in"];

fn stats_tables<'a>(
    series: impl Iterator<Item = std::result::Result<&'a SeriesStats, &'a str>>,
    exogenous: &SeriesStats,
) -> (Table, Table) {
    let mut display = Table::new(STATS_HEADERS);
    let mut raw = Table::new(STATS_HEADERS);
    for s in series {
        match s {
            Ok(s) => {
                display.push(stats_row(s, d2, d4));
                raw.push(stats_row(s, full, full));
            }
            Err(name) => {
                let mut row = vec![name.to_string()];
                row.extend(std::iter::repeat_n(FAILED.to_string(), STATS_HEADERS.len() - 1));
                display.push(row.clone());
                raw.push(row);
            }
        }
    }
    display.push(stats_row(exogenous, d2, d4));
    raw.push(stats_row(exogenous, full, full));
    (display, raw)
}

/// One display table per metric: rows are series, columns methods.
pub fn metric_table(report: &ExperimentReport, metric: MetricFn) -> Table {
    let mut t = Table::new(std::iter::once("series").chain(report.methods.iter().map(|m| m.label())));
    for outcome in &report.series {
        let mut row = vec![outcome.name().to_string()];
        for &m in &report.methods {
            row.push(match outcome.result().and_then(|r| r.eval(m)) {
                Some(e) => d4(metric(e)),
                None => FAILED.into(),
            });
        }
        t.push(row);
    }
    t
}

/// Extracts one metric from an [`EvalReport`].
pub type MetricFn = fn(&EvalReport) -> f64;

pub const METRICS: [(&str, MetricFn); 4] = [
    ("rmse", |e| e.rmse),
    ("mae", |e| e.mae),
    ("mape", |e| e.mape),
    ("smape", |e| e.smape),
];

const RETRO_HEADERS: [&str; 9] = [
    "series",
    "alpha_out",
    "eps_bar_out",
    "alpha_in",
    "eps_bar_in",
    "lhs",
    "rhs",
    "delta_mse_out_approx",
    "satisfied",
];

fn retro_tables(report: &ExperimentReport) -> (Table, Table) {
    let mut display = Table::new(RETRO_HEADERS);
    let mut raw = Table::new(RETRO_HEADERS);
    for outcome in &report.series {
        match outcome.result() {
            Some(r) => {
                let d = &r.retro;
                let nums = [
                    d.alpha_out_star,
                    d.eps_bar_out,
                    d.alpha_in_star,
                    d.eps_bar_in,
                    d.lhs,
                    d.rhs,
                    d.delta_mse_out_approx,
                ];
                let verdict = if d.condition_holds { "satisfied" } else { "not satisfied" };
                for (table, f) in [(&mut display, d4 as fn(f64) -> String), (&mut raw, full)] {
                    let mut row = vec![outcome.name().to_string()];
                    row.extend(nums.iter().map(|&v| f(v)));
                    row.push(verdict.into());
                    table.push(row);
                }
            }
            None => {
                let mut row = vec![outcome.name().to_string()];
                row.extend(std::iter::repeat_n(FAILED.to_string(), RETRO_HEADERS.len() - 1));
                display.push(row.clone());
                raw.push(row);
            }
        }
    }
    (display, raw)
}

fn metrics_full_table(report: &ExperimentReport) -> Table {
    let mut t = Table::new(["series", "method", "n", "rmse", "mae", "mape", "smape"]);
    for r in report.series.iter().filter_map(SeriesOutcome::result) {
        for (m, e) in &r.evals {
            t.push(vec![
                r.prepared.name.clone(),
                m.id().into(),
                e.n.to_string(),
                full(e.rmse),
                full(e.mae),
                full(e.mape),
                full(e.smape),
            ]);
        }
    }
    t
}

fn ingestion_table(report: &ExperimentReport) -> Table {
    let mut t = Table::new([
        "series",
        "target_rows",
        "exogenous_rows",
        "exogenous_dropped",
        "exogenous_filled",
        "rows_used",
        "in_sample",
        "out_sample",
        "flat_steps_in",
        "flat_steps_out",
        "up_hit_rate_in",
        "down_hit_rate_in",
        "up_fraction_predicted_in",
        "status",
    ]);
    for outcome in &report.series {
        match outcome {
            SeriesOutcome::Ok(r) => {
                let p = &r.prepared;
                let log = &p.align_log;
                let acc = &p.in_accuracy;
                t.push(vec![
                    p.name.clone(),
                    log.target_rows.to_string(),
                    log.exogenous_rows.to_string(),
                    log.exogenous_dropped.to_string(),
                    log.exogenous_filled.to_string(),
                    p.pair.len().to_string(),
                    p.split.in_sample.len().to_string(),
                    p.split.out_sample.len().to_string(),
                    acc.flat_step_count.to_string(),
                    r.retro.out_accuracy.flat_step_count.to_string(),
                    opt(acc.up_hit_rate, full),
                    opt(acc.down_hit_rate, full),
                    full(acc.up_fraction_predicted),
                    "ok".into(),
                ]);
            }
            SeriesOutcome::Failed { name, error } => {
                let mut row = vec![name.clone()];
                row.extend(std::iter::repeat_n(String::new(), 12));
                row.push(format!("failed: {error}"));
                t.push(row);
            }
        }
    }
    t
}

fn forecast_table(r: &crate::experiment::SeriesResult) -> Table {
    let mut t = Table::new(
        ["date", "actual"]
            .into_iter()
            .chain(r.forecasts.iter().map(|f| f.method.id())),
    );
    let sp = &r.prepared.split.out_sample;
    for (k, (date, actual)) in sp.dates().iter().zip(sp.values()).enumerate() {
        let mut row = vec![date.format("%Y-%m-%d").to_string(), full(*actual)];
        row.extend(r.forecasts.iter().map(|f| full(f.predictions[k])));
        t.push(row);
    }
    t
}

fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

struct Writer<'a> {
    dir: &'a Path,
    format: ReportFormat,
    written: Vec<PathBuf>,
}

impl Writer<'_> {
    fn write(&mut self, file: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(file);
        fs::write(&path, contents)?;
        self.written.push(path);
        Ok(())
    }

    /// Writes `<stem>.csv`, plus `<stem>.md` when markdown is selected.
    fn table(&mut self, stem: &str, table: &Table) -> Result<()> {
        self.write(&format!("{stem}.csv"), &table.to_csv()?)?;
        if self.format == ReportFormat::Markdown {
            self.write(&format!("{stem}.md"), &table.to_markdown())?;
        }
        Ok(())
    }

    /// Machine-readable output: CSV only.
    fn data(&mut self, stem: &str, table: &Table) -> Result<()> {
        self.write(&format!("{stem}.csv"), &table.to_csv()?)
    }
}

fn writer(dir: &Path, format: ReportFormat) -> Result<Writer<'_>> {
    fs::create_dir_all(dir)?;
    Ok(Writer {
        dir,
        format,
        written: Vec::new(),
    })
}

/// Writes every table of a backtest report into `dir`; returns the paths.
pub fn emit_report(report: &ExperimentReport, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    let mut w = writer(dir, format)?;

    let stats = report.series.iter().map(|s| match s {
        SeriesOutcome::Ok(r) => Ok(&r.prepared.stats),
        SeriesOutcome::Failed { name, .. } => Err(name.as_str()),
    });
    let (stats_display, stats_raw) = stats_tables(stats, &report.exogenous_stats);
    w.table("stats", &stats_display)?;
    w.data("stats_full", &stats_raw)?;

    for (stem, metric) in METRICS {
        w.table(stem, &metric_table(report, metric))?;
    }
    w.data("metrics_full", &metrics_full_table(report))?;

    let (retro_display, retro_raw) = retro_tables(report);
    w.table("retro", &retro_display)?;
    w.data("retro_full", &retro_raw)?;

    w.data("ingestion", &ingestion_table(report))?;
    for r in report.series.iter().filter_map(SeriesOutcome::result) {
        w.data(&format!("forecasts_{}", file_safe(&r.prepared.name)), &forecast_table(r))?;
    }
    Ok(w.written)
}

/// Writes the summary-statistics table only.
pub fn emit_stats(report: &StatsReport, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    let mut w = writer(dir, format)?;
    let stats = report.series.iter().map(|s| s.as_ref().map_err(|(name, _)| name.as_str()));
    let (display, raw) = stats_tables(stats, &report.exogenous_stats);
    w.table("stats", &display)?;
    w.data("stats_full", &raw)?;
    Ok(w.written)
}

const MC_HEADERS: [&str; 11] = [
    "p",
    "n",
    "trials",
    "seed",
    "predicted_delta_mse",
    "empirical_delta_mse",
    "relative_gap",
    "median_relative_gap",
    "empirical_std_error",
    "mean_accuracy",
    "condition_agreement_rate",
];

pub fn montecarlo_table(reports: &[McReport], f: fn(f64) -> String) -> Table {
    let mut t = Table::new(MC_HEADERS);
    for r in reports {
        t.push(vec![
            full(r.p),
            r.n.to_string(),
            r.trials.to_string(),
            r.seed.to_string(),
            f(r.predicted_delta_mse_in),
            f(r.empirical_delta_mse_in),
            opt(r.relative_gap, f),
            opt(r.median_relative_gap, f),
            f(r.empirical_std_error),
            f(r.mean_accuracy),
            f(r.condition_agreement_rate),
        ]);
    }
    t
}

/// Runs the Monte Carlo validation for every accuracy in `p_grid` and
/// writes `montecarlo.csv` (full precision) into `dir`.
pub fn run_montecarlo(
    n: usize,
    p_grid: &[f64],
    trials: usize,
    seed: u64,
    dir: &Path,
    format: ReportFormat,
) -> Result<Vec<McReport>> {
    if let Some(p) = p_grid.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(Error::InvalidConfig(format!("accuracy {p} outside (0, 1)")));
    }
    let reports = p_grid
        .iter()
        .map(|&p| monte_carlo_validate(n, p, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    let mut w = writer(dir, format)?;
    w.data("montecarlo", &montecarlo_table(&reports, full))?;
    if format == ReportFormat::Markdown {
        w.write("montecarlo.md", &montecarlo_table(&reports, |v| format!("{v:.6}")).to_markdown())?;
    }
    Ok(reports)
}
