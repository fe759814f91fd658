//! Point-forecast error metrics. MAPE and sMAPE are in percent.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub rmse: f64,
    pub mae: f64,
    pub mape: f64,
    pub smape: f64,
    pub n: usize,
}

fn check(actual: &[f64], predicted: &[f64]) -> Result<()> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            expected: actual.len(),
            found: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::SeriesTooShort { len: 0, required: 1 });
    }
    Ok(())
}

fn mean(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    values.sum::<f64>() / n as f64
}

pub fn mse(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted)?;
    Ok(mean(
        actual.iter().zip(predicted).map(|(y, f)| (y - f) * (y - f)),
        actual.len(),
    ))
}

pub fn rmse(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    mse(actual, predicted).map(f64::sqrt)
}

pub fn mae(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted)?;
    Ok(mean(
        actual.iter().zip(predicted).map(|(y, f)| (y - f).abs()),
        actual.len(),
    ))
}

pub fn mape(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted)?;
    if let Some(i) = actual.iter().position(|&y| y == 0.0) {
        return Err(Error::ZeroActual(i));
    }
    Ok(100.0
        * mean(
            actual.iter().zip(predicted).map(|(y, f)| ((y - f) / y).abs()),
            actual.len(),
        ))
}

pub fn smape(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted)?;
    if let Some(i) = actual
        .iter()
        .zip(predicted)
        .position(|(y, f)| y.abs() + f.abs() == 0.0)
    {
        return Err(Error::ZeroPair(i));
    }
    Ok(100.0
        * mean(
            actual
                .iter()
                .zip(predicted)
                .map(|(y, f)| (y - f).abs() / ((y.abs() + f.abs()) / 2.0)),
            actual.len(),
        ))
}

pub fn evaluate(actual: &[f64], predicted: &[f64]) -> Result<EvalReport> {
    Ok(EvalReport {
        rmse: rmse(actual, predicted)?,
        mae: mae(actual, predicted)?,
        mape: mape(actual, predicted)?,
        smape: smape(actual, predicted)?,
        n: actual.len(),
    })
}
