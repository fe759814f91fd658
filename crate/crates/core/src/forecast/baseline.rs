use crate::error::{Error, Result};
use crate::series::{Direction, TimeSeries};

use super::{Method, OneStepForecaster};

/// Next value equals the last observed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NaiveModel;

pub fn fit_naive() -> NaiveModel {
    NaiveModel
}

impl OneStepForecaster for NaiveModel {
    fn method(&self) -> Method {
        Method::Naive
    }

    fn forecast(&self, last_value: f64, _: Option<Direction>) -> Result<f64> {
        Ok(last_value)
    }
}

/// How the drift term evolves over the out-of-sample window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriftMode {
    /// Estimated once from the in-sample endpoints.
    #[default]
    Fixed,
    /// Re-estimated from the first in-sample value to the latest observed
    /// value after every step.
    Rolling,
}

/// Naive forecast plus a constant per-step drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftModel {
    pub drift: f64,
    pub mode: DriftMode,
    first: f64,
    observed: usize,
}

impl DriftModel {
    fn from_span(first: f64, last: f64, observed: usize, mode: DriftMode) -> Self {
        Self {
            drift: (last - first) / (observed - 1) as f64,
            mode,
            first,
            observed,
        }
    }
}

/// `drift = (y_M - y_1) / (M - 1)`.
pub fn fit_drift(in_sample: &TimeSeries, mode: DriftMode) -> Result<DriftModel> {
    if in_sample.len() < 3 {
        return Err(Error::SeriesTooShort {
            len: in_sample.len(),
            required: 3,
        });
    }
    let model = DriftModel::from_span(
        in_sample.first_value(),
        in_sample.last_value(),
        in_sample.len(),
        mode,
    );
    if !model.drift.is_finite() {
        return Err(Error::InvalidSeries("drift is not finite".into()));
    }
    Ok(model)
}

impl OneStepForecaster for DriftModel {
    fn method(&self) -> Method {
        Method::Drift
    }

    fn forecast(&self, last_value: f64, _: Option<Direction>) -> Result<f64> {
        Ok(last_value + self.drift)
    }

    fn observe(&mut self, _forecast: f64, actual: f64) {
        if self.mode == DriftMode::Rolling {
            *self = Self::from_span(self.first, actual, self.observed + 1, self.mode);
        }
    }
}
