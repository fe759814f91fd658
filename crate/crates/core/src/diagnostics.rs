//! Closed-form MSE-gain approximations and the retrospective condition
//! under which MPANF beats the naive forecast out of sample.

use crate::error::{Error, Result};
use crate::forecast::MpanfModel;
use crate::movement::{accuracy, AccuracyReport};
use crate::series::{mean_abs_increment, MovementSeries, SplitSeries};

/// Approximate in-sample MSE gain of MPANF over naive for a coefficient
/// `alpha`: `(4 * alpha * acc - alpha^2 - 2 * alpha) * eps_bar^2`.
pub fn delta_mse_in_approx(alpha: f64, acc: f64, eps_bar: f64) -> f64 {
    (4.0 * alpha * acc - alpha * alpha - 2.0 * alpha) * eps_bar * eps_bar
}

/// Approximate out-of-sample MSE gain when the in-sample calibration is
/// reused: `2 * a_in * e_in * a_out * e_out - (a_in * e_in)^2`.
pub fn delta_mse_out_approx(alpha_in: f64, eps_in: f64, alpha_out: f64, eps_out: f64) -> f64 {
    let step_in = alpha_in * eps_in;
    2.0 * step_in * alpha_out * eps_out - step_in * step_in
}

/// `alpha_out * eps_out >= 0.5 * alpha_in * eps_in`.
pub fn retrospective_condition(alpha_in: f64, eps_in: f64, alpha_out: f64, eps_out: f64) -> bool {
    alpha_out * eps_out >= 0.5 * alpha_in * eps_in
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetroDiagnostics {
    pub alpha_in_star: f64,
    pub eps_bar_in: f64,
    pub alpha_out_star: f64,
    pub eps_bar_out: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub condition_holds: bool,
    pub delta_mse_out_approx: f64,
    pub out_accuracy: AccuracyReport,
}

impl RetroDiagnostics {
    pub fn from_parts(
        alpha_in_star: f64,
        eps_bar_in: f64,
        alpha_out_star: f64,
        eps_bar_out: f64,
        out_accuracy: AccuracyReport,
    ) -> Self {
        let lhs = alpha_out_star * eps_bar_out;
        let rhs = 0.5 * alpha_in_star * eps_bar_in;
        Self {
            alpha_in_star,
            eps_bar_in,
            alpha_out_star,
            eps_bar_out,
            lhs,
            rhs,
            condition_holds: lhs >= rhs,
            delta_mse_out_approx: delta_mse_out_approx(
                alpha_in_star,
                eps_bar_in,
                alpha_out_star,
                eps_bar_out,
            ),
            out_accuracy,
        }
    }
}

/// Evaluates the retrospective condition once the out-of-sample window has
/// been observed. Accuracy is scored over all `N` out-of-sample steps (the
/// first starts at the boundary value); the out-of-sample mean absolute
/// increment uses the `N - 1` increments inside the window.
pub fn retrospective(
    model: &MpanfModel,
    split: &SplitSeries,
    out_predictions: &MovementSeries,
) -> Result<RetroDiagnostics> {
    let n = split.out_sample.len();
    if out_predictions.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: out_predictions.len(),
        });
    }
    let eps_bar_out = mean_abs_increment(&split.out_sample)?;
    let acc = accuracy(out_predictions, &split.out_movements())?;
    let alpha_out_star = 2.0 * acc.accuracy - 1.0;
    Ok(RetroDiagnostics::from_parts(
        model.alpha_in_star,
        model.eps_bar_in,
        alpha_out_star,
        eps_bar_out,
        acc,
    ))
}
