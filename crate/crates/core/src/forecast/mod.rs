//! One-step-ahead forecasters and the rolling evaluation loop.
//!
//! Every forecaster is fitted once on the in-sample window and then rolled
//! over the out-of-sample window: forecast the next value from the last
//! observed one, observe the actual, repeat. Models never see their own
//! forecasts as inputs; stateful models (IMA) update from observed actuals.

mod baseline;
mod ima;
mod linreg;
mod mpanf;

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::series::{Direction, MovementSeries, TimeSeries};

pub use baseline::{fit_drift, fit_naive, DriftModel, DriftMode, NaiveModel};
pub use ima::{css, fit_ima11, Ima11Model};
pub use linreg::{fit_linreg, fit_linreg_with, LinRegModel};
pub use mpanf::{fit_mpanf, forecast_step_mpanf, MpanfModel};

/// The five forecasting methods, in report column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Naive,
    Drift,
    Ima11,
    LinReg,
    Mpanf,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Naive,
        Method::Drift,
        Method::Ima11,
        Method::LinReg,
        Method::Mpanf,
    ];

    /// Identifier used in configs and file names.
    pub fn id(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Drift => "drift",
            Method::Ima11 => "ima11",
            Method::LinReg => "linreg",
            Method::Mpanf => "mpanf",
        }
    }

    /// Column heading used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            Method::Naive => "Naive",
            Method::Drift => "Naive with Drift",
            Method::Ima11 => "IMA(1,1)",
            Method::LinReg => "LR",
            Method::Mpanf => "MPANF",
        }
    }

    pub fn needs_predictions(self) -> bool {
        matches!(self, Method::LinReg | Method::Mpanf)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method `{s}`")))
    }
}

/// A fitted model that can produce one-step-ahead forecasts.
pub trait OneStepForecaster {
    fn method(&self) -> Method;

    /// Forecast of the next value given the last observed value and, for
    /// direction-aware models, the predicted direction of the next step.
    fn forecast(&self, last_value: f64, next_prediction: Option<Direction>) -> Result<f64>;

    /// Feeds back the actual value of the step just forecast.
    fn observe(&mut self, _forecast: f64, _actual: f64) {}
}

/// Forecasts aligned one-to-one with the out-of-sample observations.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastSeries {
    pub method: Method,
    pub dates: Vec<NaiveDate>,
    pub predictions: Vec<f64>,
}

impl ForecastSeries {
    pub fn len(&self) -> usize {
        self.predictions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predictions.is_empty()
    }
}

/// Rolls a fitted forecaster over the out-of-sample window.
///
/// Forecast `k` uses actuals through index `k - 1`; forecast 0 starts from
/// `boundary_value`. `out_predictions[k]` is the predicted direction of the
/// step ending at out-of-sample index `k`.
pub fn run_rolling<F: OneStepForecaster>(
    mut forecaster: F,
    out_sample: &TimeSeries,
    out_predictions: Option<&MovementSeries>,
    boundary_value: f64,
) -> Result<ForecastSeries> {
    let method = forecaster.method();
    if let Some(p) = out_predictions {
        if p.len() != out_sample.len() {
            return Err(Error::LengthMismatch {
                expected: out_sample.len(),
                found: p.len(),
            });
        }
    } else if method.needs_predictions() {
        return Err(Error::MissingPredictions(method.id()));
    }

    let mut last = boundary_value;
    let mut predictions = Vec::with_capacity(out_sample.len());
    for (k, &actual) in out_sample.values().iter().enumerate() {
        let direction = out_predictions.and_then(|p| p.get(k));
        let yhat = forecaster.forecast(last, direction)?;
        predictions.push(yhat);
        forecaster.observe(yhat, actual);
        last = actual;
    }
    Ok(ForecastSeries {
        method,
        dates: out_sample.dates().to_vec(),
        predictions,
    })
}

/// Any of the five fitted models behind one type.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Naive(NaiveModel),
    Drift(DriftModel),
    Ima11(Ima11Model),
    LinReg(LinRegModel),
    Mpanf(MpanfModel),
}

/// Estimation conventions for the under-determined baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitOptions {
    pub drift_mode: DriftMode,
    pub linreg_intercept: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            drift_mode: DriftMode::Fixed,
            linreg_intercept: true,
        }
    }
}

impl FittedModel {
    /// Fits `method` on the in-sample window. `in_predictions` holds one
    /// label per in-sample step (`M - 1`) and is needed by LR and MPANF.
    pub fn fit(
        method: Method,
        in_sample: &TimeSeries,
        in_predictions: Option<&MovementSeries>,
        options: FitOptions,
    ) -> Result<Self> {
        let preds = || in_predictions.ok_or(Error::MissingPredictions(method.id()));
        Ok(match method {
            Method::Naive => FittedModel::Naive(fit_naive()),
            Method::Drift => FittedModel::Drift(fit_drift(in_sample, options.drift_mode)?),
            Method::Ima11 => FittedModel::Ima11(fit_ima11(in_sample)?),
            Method::LinReg => FittedModel::LinReg(fit_linreg_with(
                in_sample,
                preds()?,
                options.linreg_intercept,
            )?),
            Method::Mpanf => FittedModel::Mpanf(fit_mpanf(in_sample, preds()?)?),
        })
    }
}

impl OneStepForecaster for FittedModel {
    fn method(&self) -> Method {
        match self {
            FittedModel::Naive(m) => m.method(),
            FittedModel::Drift(m) => m.method(),
            FittedModel::Ima11(m) => m.method(),
            FittedModel::LinReg(m) => m.method(),
            FittedModel::Mpanf(m) => m.method(),
        }
    }

    fn forecast(&self, last_value: f64, next_prediction: Option<Direction>) -> Result<f64> {
        match self {
            FittedModel::Naive(m) => m.forecast(last_value, next_prediction),
            FittedModel::Drift(m) => m.forecast(last_value, next_prediction),
            FittedModel::Ima11(m) => m.forecast(last_value, next_prediction),
            FittedModel::LinReg(m) => m.forecast(last_value, next_prediction),
            FittedModel::Mpanf(m) => m.forecast(last_value, next_prediction),
        }
    }

    fn observe(&mut self, forecast: f64, actual: f64) {
        match self {
            FittedModel::Naive(m) => m.observe(forecast, actual),
            FittedModel::Drift(m) => m.observe(forecast, actual),
            FittedModel::Ima11(m) => m.observe(forecast, actual),
            FittedModel::LinReg(m) => m.observe(forecast, actual),
            FittedModel::Mpanf(m) => m.observe(forecast, actual),
        }
    }
}
