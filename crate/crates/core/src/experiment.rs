//! End-to-end backtest: ingest, predict, fit, roll, evaluate, diagnose.

use crate::config::{ExperimentConfig, SeriesSpec};
use crate::diagnostics::{retrospective, RetroDiagnostics};
use crate::error::{Error, Result};
use crate::forecast::{fit_mpanf, run_rolling, FittedModel, ForecastSeries, Method, MpanfModel};
use crate::ingest::{align, load_csv, truncate_tail, AlignLog, AlignedPair, RawSeries};
use crate::metrics::{evaluate, EvalReport};
use crate::movement::{accuracy, comovement_predict, AccuracyReport};
use crate::series::{mean_abs_increment, movements, split, MovementSeries, SplitSeries};

/// Summary statistics of one series over the truncated window.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesStats {
    pub name: String,
    pub count: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
    pub acc_in: Option<f64>,
    pub eps_bar_in: Option<f64>,
}

impl SeriesStats {
    fn of_values(name: &str, values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n.is_multiple_of(2) {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        } else {
            sorted[n / 2]
        };
        Self {
            name: name.to_string(),
            count: n,
            min: sorted[0],
            median,
            max: sorted[n - 1],
            acc_in: None,
            eps_bar_in: None,
        }
    }
}

/// A target series prepared for forecasting: aligned, truncated, split,
/// with co-movement predictions for every step.
#[derive(Debug, Clone)]
pub struct PreparedSeries {
    pub name: String,
    pub pair: AlignedPair,
    pub align_log: AlignLog,
    pub split: SplitSeries,
    /// `M - 1` labels for the in-sample steps.
    pub in_predictions: MovementSeries,
    /// `N` labels for the out-of-sample steps.
    pub out_predictions: MovementSeries,
    pub in_accuracy: AccuracyReport,
    pub stats: SeriesStats,
}

#[derive(Debug, Clone)]
pub struct SeriesResult {
    pub prepared: PreparedSeries,
    pub mpanf: MpanfModel,
    pub forecasts: Vec<ForecastSeries>,
    pub evals: Vec<(Method, EvalReport)>,
    pub retro: RetroDiagnostics,
}

impl SeriesResult {
    pub fn eval(&self, method: Method) -> Option<&EvalReport> {
        self.evals.iter().find(|(m, _)| *m == method).map(|(_, r)| r)
    }

    pub fn forecast(&self, method: Method) -> Option<&ForecastSeries> {
        self.forecasts.iter().find(|f| f.method == method)
    }
}

#[derive(Debug, Clone)]
pub enum SeriesOutcome {
    Ok(Box<SeriesResult>),
    Failed { name: String, error: String },
}

impl SeriesOutcome {
    pub fn name(&self) -> &str {
        match self {
            SeriesOutcome::Ok(r) => &r.prepared.name,
            SeriesOutcome::Failed { name, .. } => name,
        }
    }

    pub fn result(&self) -> Option<&SeriesResult> {
        match self {
            SeriesOutcome::Ok(r) => Some(r),
            SeriesOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub methods: Vec<Method>,
    pub series: Vec<SeriesOutcome>,
    pub exogenous_stats: SeriesStats,
}

impl ExperimentReport {
    pub fn failures(&self) -> impl Iterator<Item = (&str, &str)> {
        self.series.iter().filter_map(|s| match s {
            SeriesOutcome::Failed { name, error } => Some((name.as_str(), error.as_str())),
            SeriesOutcome::Ok(_) => None,
        })
    }

    pub fn has_failures(&self) -> bool {
        self.failures().next().is_some()
    }

    pub fn get(&self, name: &str) -> Option<&SeriesResult> {
        self.series.iter().find(|s| s.name() == name).and_then(|s| s.result())
    }
}

/// Summary-only output of the `stats` command.
#[derive(Debug, Clone)]
pub struct StatsReport {
    pub series: Vec<std::result::Result<SeriesStats, (String, String)>>,
    pub exogenous_stats: SeriesStats,
}

fn load_exogenous(config: &ExperimentConfig) -> Result<RawSeries> {
    let spec = &config.exogenous;
    let mut raw = load_csv(&spec.path, &config.date_column, &spec.value_column)
        .map_err(|e| e.at(&spec.name, "load"))?;
    raw.name = spec.name.clone();
    Ok(raw)
}

fn exogenous_stats(config: &ExperimentConfig, exo: &RawSeries) -> Result<SeriesStats> {
    let tail = exo.tail(config.truncate_length);
    if tail.is_empty() {
        return Err(Error::SeriesTooShort { len: 0, required: 1 }.at(&exo.name, "stats"));
    }
    Ok(SeriesStats::of_values(&exo.name, tail.values()))
}

/// Loads, aligns, truncates and splits one target series and derives its
/// movement predictions from the exogenous series.
pub fn prepare_series(
    spec: &SeriesSpec,
    exogenous: &RawSeries,
    config: &ExperimentConfig,
) -> Result<PreparedSeries> {
    let name = spec.name.as_str();
    let target = load_csv(&spec.path, &config.date_column, &spec.value_column)
        .map_err(|e| e.at(name, "load"))?;
    let (aligned, align_log) = align(&target, exogenous).map_err(|e| e.at(name, "align"))?;
    let pair = truncate_tail(&aligned, config.truncate_length).map_err(|e| e.at(name, "truncate"))?;

    let predicted = comovement_predict(&pair.exogenous).map_err(|e| e.at(name, "predict"))?;
    predicted
        .check_target_len(pair.len())
        .map_err(|e| e.at(name, "predict"))?;
    let split = split(&pair.target, config.split_fraction).map_err(|e| e.at(name, "split"))?;
    let m = split.in_sample.len();
    let labels = &predicted.predictions;
    let in_predictions = labels.slice(0..m - 1)?;
    let out_predictions = labels.slice(m - 1..labels.len())?;

    let in_accuracy =
        accuracy(&in_predictions, &movements(&split.in_sample)).map_err(|e| e.at(name, "predict"))?;
    let mut stats = SeriesStats::of_values(name, pair.target.values());
    stats.acc_in = Some(in_accuracy.accuracy);
    stats.eps_bar_in = mean_abs_increment(&split.in_sample).ok();

    Ok(PreparedSeries {
        name: name.to_string(),
        pair,
        align_log,
        split,
        in_predictions,
        out_predictions,
        in_accuracy,
        stats,
    })
}

fn evaluate_series(prepared: PreparedSeries, config: &ExperimentConfig) -> Result<SeriesResult> {
    let name = prepared.name.clone();
    let sp = &prepared.split;
    let actual = sp.out_sample.values();

    let mut forecasts = Vec::with_capacity(config.methods.len());
    let mut evals = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let model = FittedModel::fit(method, &sp.in_sample, Some(&prepared.in_predictions), config.fit)
            .map_err(|e| e.at(&name, "fit"))?;
        let forecast = run_rolling(model, &sp.out_sample, Some(&prepared.out_predictions), sp.boundary_value)
            .map_err(|e| e.at(&name, "forecast"))?;
        let report = evaluate(actual, &forecast.predictions).map_err(|e| e.at(&name, "evaluate"))?;
        evals.push((method, report));
        forecasts.push(forecast);
    }

    let mpanf = fit_mpanf(&sp.in_sample, &prepared.in_predictions).map_err(|e| e.at(&name, "fit"))?;
    let retro = retrospective(&mpanf, sp, &prepared.out_predictions).map_err(|e| e.at(&name, "diagnose"))?;

    Ok(SeriesResult {
        prepared,
        mpanf,
        forecasts,
        evals,
        retro,
    })
}

/// Runs the full backtest. Per-series failures are recorded in the report
/// rather than aborting the run; only configuration and exogenous-series
/// problems fail the whole experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let exo = load_exogenous(config)?;
    let exogenous_stats = exogenous_stats(config, &exo)?;
    let series = config
        .series
        .iter()
        .map(|spec| {
            match prepare_series(spec, &exo, config).and_then(|p| evaluate_series(p, config)) {
                Ok(r) => SeriesOutcome::Ok(Box::new(r)),
                Err(e) => SeriesOutcome::Failed {
                    name: spec.name.clone(),
                    error: e.to_string(),
                },
            }
        })
        .collect();
    Ok(ExperimentReport {
        methods: config.methods.clone(),
        series,
        exogenous_stats,
    })
}

/// Computes only the per-series summary statistics.
pub fn run_stats(config: &ExperimentConfig) -> Result<StatsReport> {
    config.validate()?;
    let exo = load_exogenous(config)?;
    let exogenous_stats = exogenous_stats(config, &exo)?;
    let series = config
        .series
        .iter()
        .map(|spec| {
            prepare_series(spec, &exo, config)
                .map(|p| p.stats)
                .map_err(|e| (spec.name.clone(), e.to_string()))
        })
        .collect();
    Ok(StatsReport {
        series,
        exogenous_stats,
    })
}
