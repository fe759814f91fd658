//! Movement predictors and direction-accuracy scoring.

use crate::error::{Error, Result};
use crate::series::{movements, Direction, MovementKind, MovementSeries, TimeSeries};

/// Predicted directions for target steps `2..=len`, one per increment.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorOutput {
    pub predictions: MovementSeries,
}

impl PredictorOutput {
    pub fn new(predictions: MovementSeries) -> Result<Self> {
        if predictions.kind() != MovementKind::Predicted {
            return Err(Error::KindMismatch("predictor output must be Predicted".into()));
        }
        Ok(Self { predictions })
    }

    /// Checks the output covers every step of a target of length `target_len`.
    pub fn check_target_len(&self, target_len: usize) -> Result<()> {
        let expected = target_len.saturating_sub(1);
        if self.predictions.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: self.predictions.len(),
            });
        }
        Ok(())
    }
}

/// Anything that turns a context series into movement predictions.
///
/// The context is whatever the predictor needs, already aligned to the
/// target calendar; the output has one label per target step.
pub trait MovementPredictor {
    fn predict(&self, context: &TimeSeries) -> Result<PredictorOutput>;
}

/// Uses the realized direction of an earlier-recorded co-moving series as
/// the prediction for the target.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComovementPredictor;

impl MovementPredictor for ComovementPredictor {
    fn predict(&self, context: &TimeSeries) -> Result<PredictorOutput> {
        comovement_predict(context)
    }
}

/// +1 where the exogenous value rose, -1 where it fell or stayed flat.
pub fn comovement_predict(exogenous: &TimeSeries) -> Result<PredictorOutput> {
    let directions = movements(exogenous).directions().to_vec();
    PredictorOutput::new(MovementSeries::predicted(directions))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub accuracy: f64,
    pub correct_count: usize,
    pub incorrect_count: usize,
    /// Flat actual steps, scored as down moves.
    pub flat_step_count: usize,
    pub up_fraction_predicted: f64,
    /// Hit rate on steps whose actual direction was up, if any.
    pub up_hit_rate: Option<f64>,
    /// Hit rate on steps whose actual direction was down, if any.
    pub down_hit_rate: Option<f64>,
}

impl AccuracyReport {
    pub fn evaluated(&self) -> usize {
        self.correct_count + self.incorrect_count
    }
}

pub fn accuracy(predicted: &MovementSeries, actual: &MovementSeries) -> Result<AccuracyReport> {
    if predicted.kind() != MovementKind::Predicted || actual.kind() != MovementKind::Actual {
        return Err(Error::KindMismatch(
            "accuracy compares Predicted labels against Actual labels".into(),
        ));
    }
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            expected: actual.len(),
            found: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::SeriesTooShort { len: 0, required: 1 });
    }

    let mut correct = 0usize;
    let (mut up_total, mut up_hit, mut down_total, mut down_hit) = (0usize, 0usize, 0usize, 0usize);
    let mut predicted_up = 0usize;
    for (&p, &a) in predicted.directions().iter().zip(actual.directions()) {
        let hit = p == a;
        correct += hit as usize;
        predicted_up += (p == Direction::Up) as usize;
        match a {
            Direction::Up => {
                up_total += 1;
                up_hit += hit as usize;
            }
            Direction::Down => {
                down_total += 1;
                down_hit += hit as usize;
            }
        }
    }
    let n = actual.len();
    let rate = |hit: usize, total: usize| (total > 0).then(|| hit as f64 / total as f64);
    Ok(AccuracyReport {
        accuracy: correct as f64 / n as f64,
        correct_count: correct,
        incorrect_count: n - correct,
        flat_step_count: actual.flat_count(),
        up_fraction_predicted: predicted_up as f64 / n as f64,
        up_hit_rate: rate(up_hit, up_total),
        down_hit_rate: rate(down_hit, down_total),
    })
}
