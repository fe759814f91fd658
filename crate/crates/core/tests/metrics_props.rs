use mpanf_core::diagnostics::{delta_mse_in_approx, delta_mse_out_approx, retrospective_condition};
use mpanf_core::evaluate;
use proptest::prelude::*;

/// Per-point loop oracle, written independently of the library's iterator code.
fn oracle(actual: &[f64], predicted: &[f64]) -> [f64; 4] {
    let n = actual.len() as f64;
    let (mut se, mut ae, mut ape, mut sape) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..actual.len() {
        let err = actual[i] - predicted[i];
        se += err * err;
        ae += err.abs();
        ape += (err / actual[i]).abs();
        sape += err.abs() / ((actual[i].abs() + predicted[i].abs()) / 2.0);
    }
    [(se / n).sqrt(), ae / n, 100.0 * ape / n, 100.0 * sape / n]
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=20).prop_flat_map(|n| {
        (
            prop::collection::vec(prop_oneof![1.0..1.0e3f64, -1.0e3..-1.0f64], n),
            prop::collection::vec(-1.0e3..1.0e3f64, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn metrics_match_loop_oracle((y, f) in pairs()) {
        let r = evaluate(&y, &f).unwrap();
        let o = oracle(&y, &f);
        prop_assert!(close(r.rmse, o[0], 1e-12));
        prop_assert!(close(r.mae, o[1], 1e-12));
        prop_assert!(close(r.mape, o[2], 1e-12));
        prop_assert!(close(r.smape, o[3], 1e-12));
        prop_assert!(r.rmse >= r.mae * (1.0 - 1e-12));
        prop_assert!(r.smape <= 200.0 + 1e-9);
        prop_assert!(r.rmse >= 0.0 && r.mae >= 0.0 && r.mape >= 0.0 && r.smape >= 0.0);
    }

    #[test]
    fn optimal_coefficient_substitution(acc in 0.0..=1.0f64, eps in 1e-3..1e3f64) {
        let alpha = 2.0 * acc - 1.0;
        let v = delta_mse_in_approx(alpha, acc, eps);
        let expected = alpha * alpha * eps * eps;
        prop_assert!((v - expected).abs() <= 1e-12 * expected.max(eps * eps));
    }

    #[test]
    fn gain_is_strictly_concave_in_alpha(acc in 0.0..=1.0f64, eps in 1e-2..1e2f64, a in -2.0..2.0f64, h in 1e-3..1.0f64) {
        let second = delta_mse_in_approx(a + h, acc, eps) - 2.0 * delta_mse_in_approx(a, acc, eps)
            + delta_mse_in_approx(a - h, acc, eps);
        prop_assert!(second < 0.0);
    }

    #[test]
    fn condition_matches_sign_of_out_gain(
        alpha_in in 1e-3..1.0f64,
        eps_in in 1e-2..1e2f64,
        alpha_out in -1.0..1.0f64,
        eps_out in 1e-2..1e2f64,
    ) {
        let gain = delta_mse_out_approx(alpha_in, eps_in, alpha_out, eps_out);
        prop_assert_eq!(gain >= 0.0, retrospective_condition(alpha_in, eps_in, alpha_out, eps_out));
    }
}
