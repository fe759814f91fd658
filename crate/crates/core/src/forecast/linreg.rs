//! Linear-regression meta-learner on the last observed value and the
//! predicted direction: `y[t] ~ b0 + b1 * y[t-1] + b2 * d[t]`.

use crate::error::{Error, Result};
use crate::series::{Direction, MovementSeries, TimeSeries};

use super::{Method, OneStepForecaster};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinRegModel {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
}

/// OLS with intercept on in-sample steps `2..=M`.
pub fn fit_linreg(in_sample: &TimeSeries, in_predictions: &MovementSeries) -> Result<LinRegModel> {
    fit_linreg_with(in_sample, in_predictions, true)
}

/// OLS with or without intercept. Without it `beta0` is fixed at zero.
pub fn fit_linreg_with(
    in_sample: &TimeSeries,
    in_predictions: &MovementSeries,
    intercept: bool,
) -> Result<LinRegModel> {
    let y = in_sample.values();
    let steps = y.len() - 1;
    if in_predictions.len() != steps {
        return Err(Error::LengthMismatch {
            expected: steps,
            found: in_predictions.len(),
        });
    }
    let lagged = &y[..steps];
    let target = &y[1..];
    let signs: Vec<f64> = in_predictions.directions().iter().map(|d| d.sign()).collect();

    let (beta0, beta1, beta2) = if intercept {
        // Centering removes the intercept column from the normal system;
        // the intercept is recovered from the means afterwards.
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (mx, ms, my) = (mean(lagged), mean(&signs), mean(target));
        let xs: Vec<[f64; 2]> = lagged.iter().zip(&signs).map(|(&x, &s)| [x - mx, s - ms]).collect();
        let ys: Vec<f64> = target.iter().map(|&v| v - my).collect();
        let [b1, b2] = least_squares_2(&xs, &ys)?;
        (my - b1 * mx - b2 * ms, b1, b2)
    } else {
        let xs: Vec<[f64; 2]> = lagged.iter().zip(&signs).map(|(&x, &s)| [x, s]).collect();
        let [b1, b2] = least_squares_2(&xs, target)?;
        (0.0, b1, b2)
    };
    if ![beta0, beta1, beta2].iter().all(|b| b.is_finite()) {
        return Err(Error::SingularDesign);
    }
    Ok(LinRegModel { beta0, beta1, beta2 })
}

/// Solves the two-regressor normal equations by Cholesky factorization.
fn least_squares_2(xs: &[[f64; 2]], ys: &[f64]) -> Result<[f64; 2]> {
    let mut a = [[0.0; 2]; 2];
    let mut b = [0.0; 2];
    for (x, &y) in xs.iter().zip(ys) {
        for i in 0..2 {
            b[i] += x[i] * y;
            for j in 0..2 {
                a[i][j] += x[i] * x[j];
            }
        }
    }
    solve_spd(a, b)
}

/// Cholesky solve of a symmetric positive-definite system; a pivot that is
/// not clearly positive relative to the diagonal means rank deficiency.
fn solve_spd<const N: usize>(a: [[f64; N]; N], b: [f64; N]) -> Result<[f64; N]> {
    let scale = (0..N).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    let mut l = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let pivot = a[i][i] - s;
                if pivot.is_nan() || pivot <= 1e-12 * scale || scale == 0.0 {
                    return Err(Error::SingularDesign);
                }
                l[i][i] = pivot.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    let mut z = [0.0; N];
    for i in 0..N {
        let s: f64 = (0..i).map(|k| l[i][k] * z[k]).sum();
        z[i] = (b[i] - s) / l[i][i];
    }
    let mut x = [0.0; N];
    for i in (0..N).rev() {
        let s: f64 = (i + 1..N).map(|k| l[k][i] * x[k]).sum();
        x[i] = (z[i] - s) / l[i][i];
    }
    Ok(x)
}

impl OneStepForecaster for LinRegModel {
    fn method(&self) -> Method {
        Method::LinReg
    }

    fn forecast(&self, last_value: f64, next_prediction: Option<Direction>) -> Result<f64> {
        let d = next_prediction.ok_or(Error::MissingPredictions(Method::LinReg.id()))?;
        Ok(self.beta0 + self.beta1 * last_value + self.beta2 * d.sign())
    }
}
