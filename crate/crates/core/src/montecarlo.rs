//! Seeded synthetic random walks with controlled-accuracy direction
//! predictions, used to check the closed-form MSE-gain results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal, Uniform};

use crate::diagnostics::retrospective;
use crate::error::{Error, Result};
use crate::forecast::{fit_mpanf, fit_naive, run_rolling, MpanfModel};
use crate::metrics::mse;
use crate::movement::accuracy;
use crate::series::{mean_abs_increment, movements, split, Direction, MovementSeries, TimeSeries};

pub const DEFAULT_SEED: u64 = 20_241_013;
pub const DEFAULT_TRIALS: usize = 20;
pub const DEFAULT_STEPS: usize = 100_000;

/// Distribution of step magnitudes `|e|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MagnitudeDist {
    /// `|N(0, sigma^2)|`.
    FoldedNormal { sigma: f64 },
    Exponential { mean: f64 },
    Uniform { low: f64, high: f64 },
    Constant(f64),
}

impl Default for MagnitudeDist {
    fn default() -> Self {
        MagnitudeDist::FoldedNormal { sigma: 1.0 }
    }
}

enum Sampler {
    Folded(Normal<f64>),
    Exp(Exp<f64>),
    Uniform(Uniform<f64>),
    Constant(f64),
}

impl Sampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Sampler::Folded(d) => d.sample(rng).abs(),
            Sampler::Exp(d) => d.sample(rng),
            Sampler::Uniform(d) => d.sample(rng),
            Sampler::Constant(v) => *v,
        }
    }
}

impl MagnitudeDist {
    fn sampler(self) -> Result<Sampler> {
        let bad = |msg: String| Error::BadDistribution(msg);
        let positive = |v: f64| v > 0.0 && v.is_finite();
        match self {
            MagnitudeDist::FoldedNormal { sigma } if positive(sigma) => Normal::new(0.0, sigma)
                .map(Sampler::Folded)
                .map_err(|e| bad(e.to_string())),
            MagnitudeDist::Exponential { mean } if positive(mean) => Exp::new(1.0 / mean)
                .map(Sampler::Exp)
                .map_err(|e| bad(e.to_string())),
            MagnitudeDist::Uniform { low, high } if low >= 0.0 && high > low && high.is_finite() => {
                Uniform::new(low, high)
                    .map(Sampler::Uniform)
                    .map_err(|e| bad(e.to_string()))
            }
            MagnitudeDist::Constant(v) if positive(v) => Ok(Sampler::Constant(v)),
            other => Err(bad(format!("{other:?} does not give positive finite draws"))),
        }
    }
}

/// Random walk of `n` points with equiprobable directions and i.i.d.
/// magnitudes, plus predictions that match each true direction with
/// probability `p` independently of the direction.
///
/// Each step draws direction, magnitude and hit indicator in that order, so
/// walks for different `p` under one seed share their increments.
pub fn synth_walk(
    n: usize,
    p: f64,
    magnitude: MagnitudeDist,
    seed: u64,
) -> Result<(TimeSeries, MovementSeries)> {
    if n < 2 {
        return Err(Error::SeriesTooShort { len: n, required: 2 });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadDistribution(format!("accuracy {p} outside [0, 1]")));
    }
    let sampler = magnitude.sampler()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(n);
    let mut predictions = Vec::with_capacity(n - 1);
    let mut level = 0.0;
    values.push(level);
    for _ in 1..n {
        let direction = if rng.random_bool(0.5) {
            Direction::Up
        } else {
            Direction::Down
        };
        let size = sampler.sample(&mut rng);
        let hit = rng.random::<f64>() < p;
        level += direction.sign() * size;
        values.push(level);
        predictions.push(if hit { direction } else { direction.flip() });
    }
    Ok((TimeSeries::from_values(values)?, MovementSeries::predicted(predictions)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
    pub magnitude: MagnitudeDist,
}

impl McConfig {
    pub fn new(n: usize, p: f64, trials: usize, seed: u64) -> Self {
        Self {
            n,
            p,
            trials,
            seed,
            magnitude: MagnitudeDist::default(),
        }
    }
}

impl Default for McConfig {
    fn default() -> Self {
        Self::new(DEFAULT_STEPS, 0.7, DEFAULT_TRIALS, DEFAULT_SEED)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McTrial {
    pub seed: u64,
    pub eps_bar: f64,
    pub accuracy: f64,
    pub empirical_delta_mse_in: f64,
    pub predicted_delta_mse_in: f64,
    /// Whether the retrospective condition agreed with the realized sign of
    /// the out-of-sample MSE gain on an independent walk.
    pub condition_agrees: bool,
}

impl McTrial {
    pub fn relative_gap(&self) -> Option<f64> {
        (self.predicted_delta_mse_in > 0.0).then(|| {
            (self.empirical_delta_mse_in - self.predicted_delta_mse_in).abs()
                / self.predicted_delta_mse_in
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub p: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub empirical_delta_mse_in: f64,
    pub predicted_delta_mse_in: f64,
    /// Gap of the trial means, relative to the predicted gain. `None` when
    /// the predicted gain is zero.
    pub relative_gap: Option<f64>,
    pub median_relative_gap: Option<f64>,
    /// Standard error of the empirical gain across trials.
    pub empirical_std_error: f64,
    pub mean_accuracy: f64,
    pub condition_agreement_rate: f64,
    pub trial_results: Vec<McTrial>,
}

/// Per-trial seed: the base seed plus the trial index.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

fn retro_seed(seed: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15
}

fn run_trial(config: &McConfig, trial: usize) -> Result<McTrial> {
    let seed = trial_seed(config.seed, trial);
    let (walk, preds) = synth_walk(config.n, config.p, config.magnitude, seed)?;
    let eps_bar = mean_abs_increment(&walk)?;
    let acc = accuracy(&preds, &movements(&walk))?.accuracy;

    // One fixed coefficient for every step, set from the configured accuracy.
    let model = MpanfModel::new(eps_bar, config.p)?;
    let steps = walk.slice(1..walk.len())?;
    let actual = steps.values();
    let start = walk.first_value();
    let naive = run_rolling(fit_naive(), &steps, None, start)?;
    let adjusted = run_rolling(model, &steps, Some(&preds), start)?;
    let empirical = mse(actual, &naive.predictions)? - mse(actual, &adjusted.predictions)?;
    let predicted = model.alpha_in_star * model.alpha_in_star * eps_bar * eps_bar;

    // Retrospective check on a fresh walk split in half and calibrated from
    // its own in-sample accuracy.
    let (long, long_preds) = synth_walk(2 * config.n, config.p, config.magnitude, retro_seed(seed))?;
    let sp = split(&long, 0.5)?;
    let m = sp.in_sample.len();
    let in_preds = long_preds.slice(0..m - 1)?;
    let out_preds = long_preds.slice(m - 1..long_preds.len())?;
    let fitted = fit_mpanf(&sp.in_sample, &in_preds)?;
    let out = sp.out_sample.values();
    let naive_out = run_rolling(fit_naive(), &sp.out_sample, None, sp.boundary_value)?;
    let mpanf_out = run_rolling(fitted, &sp.out_sample, Some(&out_preds), sp.boundary_value)?;
    let gain_out = mse(out, &naive_out.predictions)? - mse(out, &mpanf_out.predictions)?;
    let retro = retrospective(&fitted, &sp, &out_preds)?;

    Ok(McTrial {
        seed,
        eps_bar,
        accuracy: acc,
        empirical_delta_mse_in: empirical,
        predicted_delta_mse_in: predicted,
        condition_agrees: (gain_out >= 0.0) == retro.condition_holds,
    })
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        0.5 * (v[mid - 1] + v[mid])
    } else {
        v[mid]
    })
}

/// Compares the empirical in-sample MSE gain of MPANF over naive with the
/// closed-form `(2p - 1)^2 * eps_bar^2`, averaged over seeded trials.
pub fn monte_carlo_validate(n: usize, p: f64, trials: usize, seed: u64) -> Result<McReport> {
    monte_carlo_validate_with(&McConfig::new(n, p, trials, seed))
}

pub fn monte_carlo_validate_with(config: &McConfig) -> Result<McReport> {
    if config.trials == 0 {
        return Err(Error::TooFewSteps("at least one trial is required".into()));
    }
    let steps = config.n.saturating_sub(1) as f64;
    let minority = config.p.min(1.0 - config.p);
    if steps * minority < 100.0 {
        return Err(Error::TooFewSteps(format!(
            "{} steps at p = {} expect fewer than 100 correct or incorrect predictions",
            config.n.saturating_sub(1),
            config.p
        )));
    }

    let trial_results = (0..config.trials)
        .map(|t| run_trial(config, t))
        .collect::<Result<Vec<_>>>()?;

    let k = trial_results.len() as f64;
    let empirical: Vec<f64> = trial_results.iter().map(|t| t.empirical_delta_mse_in).collect();
    let empirical_mean = empirical.iter().sum::<f64>() / k;
    let predicted_mean = trial_results.iter().map(|t| t.predicted_delta_mse_in).sum::<f64>() / k;
    let variance = if trial_results.len() > 1 {
        empirical.iter().map(|e| (e - empirical_mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    let gaps: Vec<f64> = trial_results.iter().filter_map(McTrial::relative_gap).collect();

    Ok(McReport {
        p: config.p,
        n: config.n,
        trials: config.trials,
        seed: config.seed,
        empirical_delta_mse_in: empirical_mean,
        predicted_delta_mse_in: predicted_mean,
        relative_gap: (predicted_mean > 0.0)
            .then(|| (empirical_mean - predicted_mean).abs() / predicted_mean),
        median_relative_gap: median(gaps),
        empirical_std_error: (variance / k).sqrt(),
        mean_accuracy: trial_results.iter().map(|t| t.accuracy).sum::<f64>() / k,
        condition_agreement_rate: trial_results.iter().filter(|t| t.condition_agrees).count() as f64 / k,
        trial_results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions_match_actuals() {
        let (walk, preds) = synth_walk(500, 1.0, MagnitudeDist::default(), 7).unwrap();
        assert_eq!(preds.directions(), movements(&walk).directions());
    }

    #[test]
    fn deterministic_under_seed() {
        let a = synth_walk(200, 0.6, MagnitudeDist::default(), 11).unwrap();
        let b = synth_walk(200, 0.6, MagnitudeDist::default(), 11).unwrap();
        assert_eq!(a, b);
        let c = synth_walk(200, 0.6, MagnitudeDist::default(), 12).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn increments_shared_across_accuracies() {
        let (a, _) = synth_walk(300, 0.6, MagnitudeDist::default(), 3).unwrap();
        let (b, _) = synth_walk(300, 0.9, MagnitudeDist::default(), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            synth_walk(10, 0.5, MagnitudeDist::FoldedNormal { sigma: 0.0 }, 1),
            Err(Error::BadDistribution(_))
        ));
        assert!(synth_walk(10, 0.5, MagnitudeDist::Uniform { low: 2.0, high: 1.0 }, 1).is_err());
        assert!(synth_walk(10, 0.5, MagnitudeDist::Constant(-1.0), 1).is_err());
        assert!(synth_walk(1, 0.5, MagnitudeDist::default(), 1).is_err());
        assert!(matches!(monte_carlo_validate(150, 0.7, 2, 1), Err(Error::TooFewSteps(_))));
    }

    #[test]
    fn other_magnitude_distributions() {
        for dist in [
            MagnitudeDist::Exponential { mean: 2.0 },
            MagnitudeDist::Uniform { low: 0.5, high: 1.5 },
            MagnitudeDist::Constant(1.0),
        ] {
            let (walk, _) = synth_walk(1000, 0.6, dist, 5).unwrap();
            assert!(mean_abs_increment(&walk).unwrap() > 0.0);
        }
    }

    #[test]
    fn coin_flip_gives_zero_gain() {
        let r = monte_carlo_validate(2_000, 0.5, 4, 9).unwrap();
        assert_eq!(r.predicted_delta_mse_in, 0.0);
        assert_eq!(r.empirical_delta_mse_in, 0.0);
        assert_eq!(r.relative_gap, None);
    }

    #[test]
    fn predicted_matches_eps_bar_per_trial() {
        let r = monte_carlo_validate(5_000, 0.7, 3, 1).unwrap();
        for t in &r.trial_results {
            let a = 2.0 * 0.7 - 1.0;
            assert!((t.predicted_delta_mse_in - a * a * t.eps_bar * t.eps_bar).abs() < 1e-15);
        }
    }
}
