use mpanf_core::forecast::{css, DriftMode, FitOptions, FittedModel, Method};
use mpanf_core::{
    delta_mse_in_approx, fit_ima11, fit_linreg, fit_mpanf, fit_naive, movements, run_rolling,
    Direction, MovementSeries, TimeSeries,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn random_walk(rng: &mut ChaCha8Rng, n: usize, start: f64) -> Vec<f64> {
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut v = vec![start];
    for _ in 1..n {
        v.push(v.last().unwrap() + normal.sample(rng));
    }
    v
}

fn random_preds(rng: &mut ChaCha8Rng, n: usize) -> MovementSeries {
    MovementSeries::predicted(
        (0..n)
            .map(|_| if rng.random_bool(0.5) { Direction::Up } else { Direction::Down })
            .collect(),
    )
}

/// Fits every method on `values[..m]` and rolls over the rest.
fn all_forecasts(values: &[f64], preds: &MovementSeries, m: usize) -> Vec<Vec<f64>> {
    let series = TimeSeries::from_values(values.to_vec()).unwrap();
    let in_sample = series.slice(0..m).unwrap();
    let out_sample = series.slice(m..values.len()).unwrap();
    let in_preds = preds.slice(0..m - 1).unwrap();
    let out_preds = preds.slice(m - 1..preds.len()).unwrap();
    Method::ALL
        .iter()
        .map(|&method| {
            let model = FittedModel::fit(method, &in_sample, Some(&in_preds), FitOptions::default()).unwrap();
            run_rolling(model, &out_sample, Some(&out_preds), in_sample.last_value())
                .unwrap()
                .predictions
        })
        .collect()
}

/// Independent grid-search oracle for the MA(1) conditional sum of squares.
fn grid_oracle_theta(diffs: &[f64]) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..=1980 {
        let theta = -0.99 + k as f64 * 0.001;
        let mut prev = 0.0;
        let mut sse = 0.0;
        for &z in diffs {
            let e = z - theta * prev;
            sse += e * e;
            prev = e;
        }
        if sse < best.0 {
            best = (sse, theta);
        }
    }
    best.1
}

#[test]
fn ima_recovers_ma1_coefficient() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let shocks: Vec<f64> = (0..10_001).map(|_| normal.sample(&mut rng)).collect();
    let diffs: Vec<f64> = (1..shocks.len()).map(|t| shocks[t] + 0.4 * shocks[t - 1]).collect();
    let mut values = vec![100.0];
    for z in &diffs {
        values.push(values.last().unwrap() + z);
    }
    let model = fit_ima11(&TimeSeries::from_values(values).unwrap()).unwrap();
    let oracle = grid_oracle_theta(&diffs);
    assert!((model.theta - 0.4).abs() < 0.05, "theta {}", model.theta);
    assert!((model.theta - oracle).abs() <= 0.001, "theta {} oracle {oracle}", model.theta);
    assert!(css(model.theta, &diffs) <= css(oracle, &diffs) + 1e-9);
}

#[test]
fn linreg_recovers_noiseless_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let preds = random_preds(&mut rng, 499);
    let mut values = vec![50.0];
    for d in preds.directions() {
        values.push(values.last().unwrap() + d.sign());
    }
    let m = fit_linreg(&TimeSeries::from_values(values).unwrap(), &preds).unwrap();
    assert!(m.beta0.abs() < 1e-9, "{m:?}");
    assert!((m.beta1 - 1.0).abs() < 1e-9, "{m:?}");
    assert!((m.beta2 - 1.0).abs() < 1e-9, "{m:?}");
}

#[test]
fn coin_flip_accuracy_reduces_to_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let values = random_walk(&mut rng, 2001, 500.0);
    let series = TimeSeries::from_values(values).unwrap();
    let in_sample = series.slice(0..1001).unwrap();
    let out_sample = series.slice(1001..2001).unwrap();
    // Half of the 1,000 in-sample predictions right, half wrong.
    let actual = movements(&in_sample);
    let in_preds = MovementSeries::predicted(
        actual
            .directions()
            .iter()
            .enumerate()
            .map(|(k, d)| if k % 2 == 0 { *d } else { d.flip() })
            .collect(),
    );
    let model = fit_mpanf(&in_sample, &in_preds).unwrap();
    assert_eq!(model.acc_in, 0.5);
    let out_preds = random_preds(&mut rng, 1000);
    let a = run_rolling(model, &out_sample, Some(&out_preds), in_sample.last_value()).unwrap();
    let b = run_rolling(fit_naive(), &out_sample, None, in_sample.last_value()).unwrap();
    assert_eq!(a.len(), 1000);
    assert!(a
        .predictions
        .iter()
        .zip(&b.predictions)
        .all(|(x, y)| x.to_bits() == y.to_bits()));
}

#[test]
fn coefficient_maximizes_gain_approximation() {
    for k in 0..=50 {
        let acc = 0.5 + k as f64 * 0.01;
        for eps in [0.1, 1.0, 10.0] {
            let (mut best_alpha, mut best) = (f64::NAN, f64::NEG_INFINITY);
            for j in 0..=30_000 {
                let alpha = -1.0 + j as f64 * 1e-4;
                let v = delta_mse_in_approx(alpha, acc, eps);
                if v > best {
                    best = v;
                    best_alpha = alpha;
                }
            }
            let star = 2.0 * acc - 1.0;
            assert!((best_alpha - star).abs() <= 1e-4 + 1e-12, "acc {acc} eps {eps}: {best_alpha}");
            let expected = star * star * eps * eps;
            assert!((best - expected).abs() <= 1e-8 * expected.max(1e-300) || (best - expected).abs() < 1e-15);
        }
    }
}

#[test]
fn rolling_drift_option_is_respected() {
    let series = TimeSeries::from_values(vec![0.0, 1.0, 2.0, 10.0, 10.0]).unwrap();
    let in_sample = series.slice(0..3).unwrap();
    let out = series.slice(3..5).unwrap();
    let opts = FitOptions {
        drift_mode: DriftMode::Rolling,
        ..FitOptions::default()
    };
    let model = FittedModel::fit(Method::Drift, &in_sample, None, opts).unwrap();
    let f = run_rolling(model, &out, None, 2.0).unwrap();
    assert_eq!(f.predictions, vec![3.0, 10.0 + 10.0 / 3.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn forecasts_shift_with_the_data(seed in any::<u64>(), shift in -1.0e3..1.0e3f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = random_walk(&mut rng, 80, 200.0);
        let preds = random_preds(&mut rng, 79);
        let shifted: Vec<f64> = values.iter().map(|v| v + shift).collect();
        let base = all_forecasts(&values, &preds, 40);
        let moved = all_forecasts(&shifted, &preds, 40);
        for (method, (a, b)) in Method::ALL.iter().zip(base.iter().zip(&moved)) {
            for (x, y) in a.iter().zip(b) {
                prop_assert!((y - (x + shift)).abs() < 1e-7 * (1.0 + x.abs() + shift.abs()), "{method}: {x} {y}");
            }
        }
    }

    #[test]
    fn forecasts_scale_with_the_data(seed in any::<u64>(), scale in 0.01..100.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = random_walk(&mut rng, 80, 200.0);
        let preds = random_preds(&mut rng, 79);
        let scaled: Vec<f64> = values.iter().map(|v| v * scale).collect();
        let base = all_forecasts(&values, &preds, 40);
        let moved = all_forecasts(&scaled, &preds, 40);
        for (method, (a, b)) in Method::ALL.iter().zip(base.iter().zip(&moved)) {
            if *method == Method::LinReg {
                continue;
            }
            for (x, y) in a.iter().zip(b) {
                prop_assert!((y - x * scale).abs() < 1e-6 * scale * (1.0 + x.abs()), "{method}: {x} {y}");
            }
        }
    }

    #[test]
    fn forecasts_never_look_ahead(seed in any::<u64>(), k in 0usize..40, bump in -50.0..50.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = random_walk(&mut rng, 80, 200.0);
        let preds = random_preds(&mut rng, 79);
        let mut perturbed = values.clone();
        perturbed[40 + k] += bump;
        let base = all_forecasts(&values, &preds, 40);
        let moved = all_forecasts(&perturbed, &preds, 40);
        for (a, b) in base.iter().zip(&moved) {
            for i in 0..=k {
                prop_assert_eq!(a[i].to_bits(), b[i].to_bits());
            }
        }
    }
}
