//! The movement-prediction-adjusted naive forecast.
//!
//! The forecast is the naive forecast shifted by `d * alpha * eps_bar`, where
//! `d` is the predicted direction of the next step, `eps_bar` the in-sample
//! mean absolute increment, and `alpha = 2 * acc - 1` with `acc` the
//! in-sample direction accuracy. That `alpha` maximizes the concave
//! approximation `(4 * alpha * acc - alpha^2 - 2 * alpha) * eps_bar^2` of the
//! in-sample MSE gain over the naive forecast.

use log::warn;

use crate::error::{Error, Result};
use crate::movement::accuracy;
use crate::series::{mean_abs_increment, movements, Direction, MovementSeries, TimeSeries};

use super::{Method, OneStepForecaster};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpanfModel {
    pub eps_bar_in: f64,
    pub acc_in: f64,
    pub alpha_in_star: f64,
}

impl MpanfModel {
    pub fn new(eps_bar_in: f64, acc_in: f64) -> Result<Self> {
        if !(eps_bar_in > 0.0 && eps_bar_in.is_finite()) {
            return Err(Error::DegenerateSeries(format!(
                "mean absolute increment must be positive, got {eps_bar_in}"
            )));
        }
        if !(0.0..=1.0).contains(&acc_in) {
            return Err(Error::InvalidSeries(format!("accuracy {acc_in} outside [0, 1]")));
        }
        // Below chance the coefficient goes negative: the forecast fades the
        // predicted direction.
        if acc_in < 0.5 {
            warn!("in-sample accuracy {acc_in:.4} is below 0.5; MPANF coefficient is negative");
        }
        Ok(Self {
            eps_bar_in,
            acc_in,
            alpha_in_star: 2.0 * acc_in - 1.0,
        })
    }

    /// The adjustment added to the naive forecast.
    pub fn adjustment(&self, direction: Direction) -> f64 {
        direction.sign() * self.alpha_in_star * self.eps_bar_in
    }
}

/// Calibrates on the in-sample window; `in_predictions` holds one predicted
/// direction per in-sample step (`M - 1` labels).
pub fn fit_mpanf(in_sample: &TimeSeries, in_predictions: &MovementSeries) -> Result<MpanfModel> {
    let actual = movements(in_sample);
    if in_predictions.len() != actual.len() {
        return Err(Error::LengthMismatch {
            expected: actual.len(),
            found: in_predictions.len(),
        });
    }
    let eps_bar = mean_abs_increment(in_sample)?;
    let acc = accuracy(in_predictions, &actual)?;
    MpanfModel::new(eps_bar, acc.accuracy)
}

pub fn forecast_step_mpanf(model: &MpanfModel, last_value: f64, next_prediction: Direction) -> f64 {
    last_value + model.adjustment(next_prediction)
}

impl OneStepForecaster for MpanfModel {
    fn method(&self) -> Method {
        Method::Mpanf
    }

    fn forecast(&self, last_value: f64, next_prediction: Option<Direction>) -> Result<f64> {
        let d = next_prediction.ok_or(Error::MissingPredictions(Method::Mpanf.id()))?;
        Ok(forecast_step_mpanf(self, last_value, d))
    }
}
