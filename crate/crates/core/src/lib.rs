//! Movement-prediction-adjusted naive forecasting (MPANF).
//!
//! MPANF shifts the naive forecast by `d * alpha * eps_bar`: the predicted
//! direction of the next step, a coefficient set from in-sample direction
//! accuracy (`alpha = 2 * acc - 1`), and the in-sample mean absolute
//! increment. The crate also provides the baselines it is compared against
//! (naive, naive with drift, IMA(1,1), linear regression), point-forecast
//! metrics, closed-form MSE-gain diagnostics, a seeded Monte Carlo
//! validator, and the backtest pipeline behind the `mpanf` CLI.
//!
//! ```
//! use mpanf_core::{fit_mpanf, run_rolling, split, comovement_predict, TimeSeries};
//!
//! let target = TimeSeries::from_values(vec![10.0, 10.5, 10.2, 10.8, 11.0, 10.7, 11.1, 11.4]).unwrap();
//! let exo = TimeSeries::from_values(vec![50.0, 51.0, 50.5, 51.5, 52.0, 51.0, 51.8, 52.5]).unwrap();
//! let preds = comovement_predict(&exo).unwrap().predictions;
//! let sp = split(&target, 0.5).unwrap();
//! let m = sp.in_sample.len();
//! let model = fit_mpanf(&sp.in_sample, &preds.slice(0..m - 1).unwrap()).unwrap();
//! let out_preds = preds.slice(m - 1..preds.len()).unwrap();
//! let forecast = run_rolling(model, &sp.out_sample, Some(&out_preds), sp.boundary_value).unwrap();
//! assert_eq!(forecast.len(), sp.out_sample.len());
//! ```

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod forecast;
pub mod ingest;
pub mod metrics;
pub mod montecarlo;
pub mod movement;
pub mod report;
pub mod series;

pub use config::{ExperimentConfig, SeriesSpec};
pub use diagnostics::{
    delta_mse_in_approx, delta_mse_out_approx, retrospective, retrospective_condition,
    RetroDiagnostics,
};
pub use error::{Error, Result};
pub use experiment::{run_experiment, run_stats, ExperimentReport, SeriesStats};
pub use forecast::{
    fit_drift, fit_ima11, fit_linreg, fit_mpanf, fit_naive, forecast_step_mpanf, run_rolling,
    DriftMode, FitOptions, FittedModel, ForecastSeries, Method, MpanfModel, OneStepForecaster,
};
pub use ingest::{align, load_csv, truncate_tail, AlignedPair, RawSeries};
pub use metrics::{evaluate, EvalReport};
pub use montecarlo::{monte_carlo_validate, synth_walk, MagnitudeDist, McReport};
pub use movement::{accuracy, comovement_predict, AccuracyReport, MovementPredictor, PredictorOutput};
pub use report::{emit_report, emit_stats, run_montecarlo, ReportFormat};
pub use series::{
    increments, mean_abs_increment, movements, split, Direction, IncrementSeries, MovementKind,
    MovementSeries, SplitSeries, TimeSeries,
};
