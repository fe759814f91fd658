//! CSV loading and calendar alignment of a target series with an
//! exogenous series.

use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// A named series as read from disk, sorted by date, gaps allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSeries {
    pub name: String,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl RawSeries {
    /// Sorts by date and rejects duplicates.
    pub fn new(name: impl Into<String>, dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: dates.len(),
                found: values.len(),
            });
        }
        let mut rows: Vec<(NaiveDate, f64)> = dates.into_iter().zip(values).collect();
        rows.sort_by_key(|r| r.0);
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateDate(w[0].0));
        }
        let (dates, values) = rows.into_iter().unzip();
        Ok(Self {
            name: name.into(),
            dates,
            values,
        })
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

    /// Keeps only the `len` most recent observations.
    pub fn tail(&self, len: usize) -> Self {
        let start = self.len().saturating_sub(len);
        Self {
            name: self.name.clone(),
            dates: self.dates[start..].to_vec(),
            values: self.values[start..].to_vec(),
        }
    }

    pub fn to_time_series(&self) -> Result<TimeSeries> {
        TimeSeries::new(self.dates.clone(), self.values.clone())
    }
}

/// Loads one column of a headered CSV file. Dates must be `YYYY-MM-DD`.
pub fn load_csv(path: &Path, date_column: &str, value_column: &str) -> Result<RawSeries> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::ParseError {
            row: 0,
            reason: e.to_string(),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::ParseError {
            row: 0,
            reason: e.to_string(),
        })?
        .clone();
    let column = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::ParseError {
            row: 0,
            reason: format!("missing column `{name}`"),
        })
    };
    let date_idx = column(date_column)?;
    let value_idx = column(value_column)?;

    let mut dates = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        // Row numbers count the header as row 1.
        let row = i + 2;
        let record = record.map_err(|e| Error::ParseError {
            row,
            reason: e.to_string(),
        })?;
        let field = |idx: usize| {
            record.get(idx).ok_or_else(|| Error::ParseError {
                row,
                reason: "short record".into(),
            })
        };
        let raw_date = field(date_idx)?;
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d").map_err(|e| Error::ParseError {
            row,
            reason: format!("bad date `{raw_date}`: {e}"),
        })?;
        let raw_value = field(value_idx)?;
        let value: f64 = raw_value.parse().map_err(|_| Error::ParseError {
            row,
            reason: format!("bad value `{raw_value}`"),
        })?;
        if !value.is_finite() {
            return Err(Error::ParseError {
                row,
                reason: format!("non-finite value `{raw_value}`"),
            });
        }
        dates.push(date);
        values.push(value);
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    RawSeries::new(name, dates, values)
}

/// Target and exogenous series on the same calendar.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPair {
    pub target: TimeSeries,
    pub exogenous: TimeSeries,
}

impl AlignedPair {
    pub fn new(target: TimeSeries, exogenous: TimeSeries) -> Result<Self> {
        if target.dates() != exogenous.dates() {
            return Err(Error::InvalidSeries(
                "aligned series must share one date vector".into(),
            ));
        }
        Ok(Self { target, exogenous })
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }
}

/// Row accounting from [`align`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AlignLog {
    pub target_rows: usize,
    pub exogenous_rows: usize,
    /// Exogenous observations dated off the target calendar.
    pub exogenous_dropped: usize,
    /// Target dates that took a forward-filled exogenous value.
    pub exogenous_filled: usize,
}

/// Puts the exogenous series on the target calendar: extra exogenous dates
/// are dropped and missing ones take the most recent prior exogenous value.
pub fn align(target: &RawSeries, exogenous: &RawSeries) -> Result<(AlignedPair, AlignLog)> {
    let target_ts = target.to_time_series()?;
    let mut aligned = Vec::with_capacity(target.len());
    let mut log = AlignLog {
        target_rows: target.len(),
        exogenous_rows: exogenous.len(),
        ..AlignLog::default()
    };

    let exo_dates = exogenous.dates();
    let exo_values = exogenous.values();
    let mut j = 0;
    let mut last: Option<f64> = None;
    let mut used = 0;
    for &date in target.dates() {
        while j < exo_dates.len() && exo_dates[j] < date {
            last = Some(exo_values[j]);
            j += 1;
        }
        if j < exo_dates.len() && exo_dates[j] == date {
            let v = exo_values[j];
            last = Some(v);
            used += 1;
            j += 1;
            aligned.push(v);
        } else {
            let v = last.ok_or(Error::NoPriorExogenousValue(date))?;
            log.exogenous_filled += 1;
            aligned.push(v);
        }
    }
    log.exogenous_dropped = exogenous.len() - used;

    let exo_ts = TimeSeries::new(target.dates().to_vec(), aligned)?;
    Ok((AlignedPair::new(target_ts, exo_ts)?, log))
}

/// Keeps the most recent `length` observations of both series.
pub fn truncate_tail(pair: &AlignedPair, length: usize) -> Result<AlignedPair> {
    if pair.len() < length {
        return Err(Error::SeriesTooShort {
            len: pair.len(),
            required: length,
        });
    }
    let start = pair.len() - length;
    AlignedPair::new(
        pair.target.slice(start..pair.len())?,
        pair.exogenous.slice(start..pair.len())?,
    )
}
