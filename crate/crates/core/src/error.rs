use std::path::PathBuf;

use chrono::NaiveDate;
use thiserror::Error;

/// Errors produced anywhere in the forecasting pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series too short: length {len}, need at least {required}")]
    SeriesTooShort { len: usize, required: usize },

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("split too small: {len} observations at fraction {fraction} gives in-sample {in_len}, out-of-sample {out_len}")]
    SplitTooSmall {
        len: usize,
        fraction: f64,
        in_len: usize,
        out_len: usize,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("movement kind mismatch: {0}")]
    KindMismatch(String),

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("parse error at row {row}: {reason}")]
    ParseError { row: usize, reason: String },

    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),

    #[error("no exogenous observation on or before {0}")]
    NoPriorExogenousValue(NaiveDate),

    #[error("method `{0}` needs movement predictions")]
    MissingPredictions(&'static str),

    #[error("least-squares design is rank deficient")]
    SingularDesign,

    #[error("estimation did not converge: {0}")]
    NonConvergent(String),

    #[error("actual value is zero at index {0}; MAPE undefined")]
    ZeroActual(usize),

    #[error("actual and forecast are both zero at index {0}; sMAPE undefined")]
    ZeroPair(usize),

    #[error("bad magnitude distribution: {0}")]
    BadDistribution(String),

    #[error("too few steps: {0}")]
    TooFewSteps(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{series} [{stage}]: {source}")]
    Stage {
        series: String,
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at(self, series: &str, stage: &'static str) -> Self {
        Error::Stage {
            series: series.to_string(),
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
