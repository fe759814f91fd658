//! IMA(1,1), i.e. ARIMA(0,1,1) without constant, fitted by conditional sum
//! of squares on the first differences.
//!
//! Differences follow `z[t] = e[t] + theta * e[t-1]` with the pre-sample
//! residual taken as zero, so `e[t] = z[t] - theta * e[t-1]`. The one-step
//! forecast is `y[t] + theta * e[t]`.

use crate::error::{Error, Result};
use crate::series::{increments, Direction, TimeSeries};

use super::{Method, OneStepForecaster};

const THETA_BOUND: f64 = 0.99;
const GRID_STEP: f64 = 0.01;
const TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ima11Model {
    pub theta: f64,
    /// Residual of the most recent observed step.
    pub last_residual: f64,
}

/// Conditional sum of squared one-step errors of an MA(1) on `diffs`.
pub fn css(theta: f64, diffs: &[f64]) -> f64 {
    residuals(theta, diffs).map(|e| e * e).sum()
}

fn residuals(theta: f64, diffs: &[f64]) -> impl Iterator<Item = f64> + '_ {
    diffs.iter().scan(0.0, move |prev, &z| {
        let e = z - theta * *prev;
        *prev = e;
        Some(e)
    })
}

/// Minimizes CSS over `theta` in (-0.99, 0.99): a coarse grid locates the
/// basin, golden-section search refines it to 1e-6.
fn minimize_css(diffs: &[f64]) -> f64 {
    let steps = (2.0 * THETA_BOUND / GRID_STEP).round() as usize;
    let grid = |k: usize| -THETA_BOUND + k as f64 * GRID_STEP;
    let best = (0..=steps)
        .map(|k| (k, css(grid(k), diffs)))
        .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });

    let mut lo = grid(best.0.saturating_sub(1));
    let mut hi = grid((best.0 + 1).min(steps));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = css(x1, diffs);
    let mut f2 = css(x2, diffs);
    while hi - lo > TOLERANCE {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = css(x1, diffs);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = css(x2, diffs);
        }
    }
    0.5 * (lo + hi)
}

pub fn fit_ima11(in_sample: &TimeSeries) -> Result<Ima11Model> {
    if in_sample.len() < 3 {
        return Err(Error::SeriesTooShort {
            len: in_sample.len(),
            required: 3,
        });
    }
    let diffs = increments(in_sample).into_vec();
    let theta = minimize_css(&diffs);
    if !theta.is_finite() || theta.abs() >= 1.0 {
        return Err(Error::NonConvergent(format!("theta = {theta}")));
    }
    let last_residual = residuals(theta, &diffs).last().unwrap_or(0.0);
    if !last_residual.is_finite() {
        return Err(Error::NonConvergent("residual recursion diverged".into()));
    }
    Ok(Ima11Model {
        theta,
        last_residual,
    })
}

impl OneStepForecaster for Ima11Model {
    fn method(&self) -> Method {
        Method::Ima11
    }

    fn forecast(&self, last_value: f64, _: Option<Direction>) -> Result<f64> {
        Ok(last_value + self.theta * self.last_residual)
    }

    fn observe(&mut self, forecast: f64, actual: f64) {
        self.last_residual = actual - forecast;
    }
}
