//! Dated price series, their increments and direction labels, and the
//! in-sample / out-of-sample split.
//!
//! A series `y` is read as `y[t] = y[t-1] + d[t] * |e[t]|`: every step is an
//! increment whose sign is the movement label and whose magnitude feeds the
//! mean absolute increment used to size forecast adjustments.

use std::ops::Range;

use chrono::{Days, NaiveDate};

use crate::error::{Error, Result};

/// Ordered, dated sequence of observations with at least two points.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: dates.len(),
                found: values.len(),
            });
        }
        if values.len() < 2 {
            return Err(Error::SeriesTooShort {
                len: values.len(),
                required: 2,
            });
        }
        if let Some(w) = dates.windows(2).find(|w| w[0] >= w[1]) {
            return Err(if w[0] == w[1] {
                Error::DuplicateDate(w[0])
            } else {
                Error::InvalidSeries(format!("dates not increasing at {}", w[1]))
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!("non-finite value at index {i}")));
        }
        Ok(Self { dates, values })
    }

    /// Builds a series on consecutive calendar days starting at `start`.
    pub fn from_values_starting(start: NaiveDate, values: Vec<f64>) -> Result<Self> {
        let dates = (0..values.len() as u64)
            .map(|k| start + Days::new(k))
            .collect();
        Self::new(dates, values)
    }

    /// Builds a series on consecutive calendar days from 2000-01-01.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::from_values_starting(NaiveDate::from_ymd_opt(2000, 1, 1).unwrap(), values)
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first_value(&self) -> f64 {
        self.values[0]
    }

    pub fn last_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn first_date(&self) -> NaiveDate {
        self.dates[0]
    }

    pub fn last_date(&self) -> NaiveDate {
        self.dates[self.dates.len() - 1]
    }

    /// Sub-series over an index range; the range must keep at least two points.
    pub fn slice(&self, range: Range<usize>) -> Result<Self> {
        if range.end > self.len() || range.start > range.end {
            return Err(Error::InvalidSeries(format!(
                "slice {}..{} out of bounds for length {}",
                range.start,
                range.end,
                self.len()
            )));
        }
        Self::new(
            self.dates[range.clone()].to_vec(),
            self.values[range].to_vec(),
        )
    }

    /// Applies `f` to every value, keeping the dates.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.dates.clone(), self.values.iter().map(|&v| f(v)).collect())
    }
}

/// Per-step differences `values[k+1] - values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementSeries {
    increments: Vec<f64>,
}

impl IncrementSeries {
    pub fn as_slice(&self) -> &[f64] {
        &self.increments
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.increments
    }
}

/// Direction of one step. Flat steps are labelled `Down`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    /// `Up` for a strictly positive change, `Down` otherwise.
    pub fn from_change(change: f64) -> Self {
        if change > 0.0 {
            Direction::Up
        } else {
            Direction::Down
        }
    }

    /// +1.0 or -1.0.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }

    pub fn from_i8(label: i8) -> Option<Self> {
        match label {
            1 => Some(Direction::Up),
            -1 => Some(Direction::Down),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovementKind {
    Actual,
    Predicted,
}

/// Direction labels, either observed or predicted.
///
/// Actual series remember which steps were flat (zero increment) so that
/// accuracy reports can count them; predicted series never have flat steps.
#[derive(Debug, Clone, PartialEq)]
pub struct MovementSeries {
    directions: Vec<Direction>,
    flat: Vec<bool>,
    kind: MovementKind,
}

impl MovementSeries {
    pub fn predicted(directions: Vec<Direction>) -> Self {
        let flat = vec![false; directions.len()];
        Self {
            directions,
            flat,
            kind: MovementKind::Predicted,
        }
    }

    /// Actual labels with no flat-step information.
    pub fn actual(directions: Vec<Direction>) -> Self {
        let flat = vec![false; directions.len()];
        Self {
            directions,
            flat,
            kind: MovementKind::Actual,
        }
    }

    /// Actual labels derived from raw increments.
    pub fn from_increments(increments: &[f64]) -> Self {
        Self {
            directions: increments.iter().map(|&e| Direction::from_change(e)).collect(),
            flat: increments.iter().map(|&e| e == 0.0).collect(),
            kind: MovementKind::Actual,
        }
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn kind(&self) -> MovementKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<Direction> {
        self.directions.get(k).copied()
    }

    pub fn is_flat(&self, k: usize) -> bool {
        self.flat.get(k).copied().unwrap_or(false)
    }

    pub fn flat_count(&self) -> usize {
        self.flat.iter().filter(|&&f| f).count()
    }

    /// Labels as +1 / -1.
    pub fn labels(&self) -> Vec<i8> {
        self.directions.iter().map(|d| d.as_i8()).collect()
    }

    pub fn slice(&self, range: Range<usize>) -> Result<Self> {
        if range.end > self.len() || range.start > range.end {
            return Err(Error::LengthMismatch {
                expected: range.end,
                found: self.len(),
            });
        }
        Ok(Self {
            directions: self.directions[range.clone()].to_vec(),
            flat: self.flat[range].to_vec(),
            kind: self.kind,
        })
    }

    /// Negates every label.
    pub fn flipped(&self) -> Self {
        Self {
            directions: self.directions.iter().map(|d| d.flip()).collect(),
            flat: vec![false; self.directions.len()],
            kind: self.kind,
        }
    }
}

/// In-sample / out-of-sample partition of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSeries {
    pub in_sample: TimeSeries,
    pub out_sample: TimeSeries,
    /// Last in-sample observation; the first out-of-sample naive forecast.
    pub boundary_value: f64,
}

impl SplitSeries {
    /// Actual directions of the `N` out-of-sample steps, the first of which
    /// starts from the boundary value.
    pub fn out_movements(&self) -> MovementSeries {
        let mut prev = self.boundary_value;
        let increments: Vec<f64> = self
            .out_sample
            .values()
            .iter()
            .map(|&v| {
                let e = v - prev;
                prev = v;
                e
            })
            .collect();
        MovementSeries::from_increments(&increments)
    }
}

pub fn increments(series: &TimeSeries) -> IncrementSeries {
    IncrementSeries {
        increments: series.values.windows(2).map(|w| w[1] - w[0]).collect(),
    }
}

/// Actual movement labels, `len - 1` of them.
pub fn movements(series: &TimeSeries) -> MovementSeries {
    MovementSeries::from_increments(increments(series).as_slice())
}

/// Arithmetic mean of absolute increments. Fails when every step is flat.
pub fn mean_abs_increment(series: &TimeSeries) -> Result<f64> {
    let inc = increments(series);
    let total: f64 = inc.as_slice().iter().map(|e| e.abs()).sum();
    let mean = total / inc.len() as f64;
    if mean > 0.0 {
        Ok(mean)
    } else {
        Err(Error::DegenerateSeries(
            "all increments are zero, mean absolute increment must be positive".into(),
        ))
    }
}

/// Splits at `floor(len * in_fraction)`.
pub fn split(series: &TimeSeries, in_fraction: f64) -> Result<SplitSeries> {
    let len = series.len();
    let too_small = |in_len, out_len| Error::SplitTooSmall {
        len,
        fraction: in_fraction,
        in_len,
        out_len,
    };
    if !(in_fraction > 0.0 && in_fraction < 1.0) {
        return Err(too_small(0, 0));
    }
    let m = (len as f64 * in_fraction).floor() as usize;
    let n = len - m;
    // A TimeSeries holds at least two points, so both windows need two.
    if m < 2 || n < 2 {
        return Err(too_small(m, n));
    }
    let in_sample = series.slice(0..m)?;
    let out_sample = series.slice(m..len)?;
    Ok(SplitSeries {
        boundary_value: in_sample.last_value(),
        in_sample,
        out_sample,
    })
}
