use std::fs;
use std::path::Path;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use mpanf_core::{
    emit_report, emit_stats, evaluate, run_experiment, run_stats, ExperimentConfig, Method,
    ReportFormat, SeriesSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn weekdays(n: usize) -> Vec<NaiveDate> {
    let mut d = NaiveDate::from_ymd_opt(2012, 1, 2).unwrap();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d + Days::new(1);
    }
    out
}

fn write_csv(dir: &Path, file: &str, column: &str, dates: &[NaiveDate], values: &[f64]) {
    let mut text = format!("Date,{column},Volume\n");
    for (d, v) in dates.iter().zip(values) {
        text.push_str(&format!("{},{v},1000\n", d.format("%Y-%m-%d")));
    }
    fs::write(dir.join(file), text).unwrap();
}

fn walk(rng: &mut ChaCha8Rng, n: usize, start: f64) -> Vec<f64> {
    let mut v = vec![start];
    for _ in 1..n {
        let step: f64 = rng.random_range(-1.0..1.0);
        v.push(v.last().unwrap() + step);
    }
    v
}

/// Writes an exogenous series with a gap and a weekend row, and two targets
/// that partly follow its direction.
fn fixture(dir: &Path) -> ExperimentConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dates = weekdays(260);
    let exo = walk(&mut rng, dates.len(), 6000.0);
    let (mut exo_dates, mut exo_values) = (dates.clone(), exo.clone());
    exo_dates.remove(30);
    exo_values.remove(30);
    exo_dates.insert(5, NaiveDate::from_ymd_opt(2012, 1, 7).unwrap());
    exo_values.insert(5, 5999.0);
    write_csv(dir, "EXO.csv", "Open", &exo_dates, &exo_values);

    for (name, follow) in [("AAA", 0.7), ("BBB", 0.55)] {
        let mut v = vec![100.0];
        for k in 1..dates.len() {
            let up = exo[k] > exo[k - 1];
            let up = if rng.random_bool(follow) { up } else { !up };
            let size: f64 = rng.random_range(0.1..2.0);
            v.push(v[k - 1] + if up { size } else { -size });
        }
        write_csv(dir, &format!("{name}.csv"), "Close", &dates, &v);
    }
    let spec = |name: &str, col: &str| SeriesSpec {
        name: name.into(),
        path: dir.join(format!("{name}.csv")),
        value_column: col.into(),
    };
    let mut config = ExperimentConfig::new(vec![spec("AAA", "Close"), spec("BBB", "Close")], spec("EXO", "Open"));
    config.truncate_length = 200;
    config
}

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join(file)).unwrap()
}

#[test]
fn pipeline_produces_all_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let config = fixture(tmp.path());
    let report = run_experiment(&config).unwrap();
    assert!(!report.has_failures());
    let r = report.get("AAA").unwrap();
    assert_eq!(r.prepared.pair.len(), 200);
    assert_eq!(r.prepared.split.in_sample.len(), 100);
    assert_eq!(r.prepared.in_predictions.len(), 99);
    assert_eq!(r.prepared.out_predictions.len(), 100);
    assert_eq!(r.prepared.align_log.exogenous_dropped, 1);
    assert_eq!(r.retro.alpha_in_star, r.mpanf.alpha_in_star);
    assert!(r.prepared.stats.acc_in.unwrap() > 0.55);

    let out = tmp.path().join("out");
    let files = emit_report(&report, &out, ReportFormat::Markdown).unwrap();
    for f in ["stats.csv", "stats.md", "rmse.csv", "smape.md", "metrics_full.csv", "retro.csv", "retro_full.csv", "ingestion.csv", "forecasts_AAA.csv"] {
        assert!(files.contains(&out.join(f)), "{f} missing");
    }
    let rmse = read(&out, "rmse.csv");
    assert!(rmse.starts_with("series,Naive,Naive with Drift,\"IMA(1,1)\",LR,MPANF\n"));
    assert_eq!(rmse.lines().count(), 3);
    let stats = read(&out, "stats.csv");
    assert_eq!(stats.lines().last().unwrap().split(',').next(), Some("EXO"));
    assert_eq!(read(&out, "forecasts_AAA.csv").lines().count(), 101);
}

#[test]
fn full_precision_output_reproduces_metrics() {
    let tmp = tempfile::tempdir().unwrap();
    let config = fixture(tmp.path());
    let report = run_experiment(&config).unwrap();
    let out = tmp.path().join("out");
    emit_report(&report, &out, ReportFormat::Csv).unwrap();

    let forecasts = read(&out, "forecasts_BBB.csv");
    let mut lines = forecasts.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').skip(1).map(|c| c.parse().unwrap()).collect())
        .collect();
    let actual: Vec<f64> = rows.iter().map(|r| r[0]).collect();

    let metrics = read(&out, "metrics_full.csv");
    for line in metrics.lines().skip(1).filter(|l| l.starts_with("BBB,")) {
        let cells: Vec<&str> = line.split(',').collect();
        let col = header.iter().position(|h| *h == cells[1]).unwrap() - 1;
        let predicted: Vec<f64> = rows.iter().map(|r| r[col]).collect();
        let e = evaluate(&actual, &predicted).unwrap();
        let stored: Vec<f64> = cells[3..].iter().map(|c| c.parse().unwrap()).collect();
        assert_eq!(stored, vec![e.rmse, e.mae, e.mape, e.smape], "{line}");
    }
}

#[test]
fn single_method_run_has_single_column() {
    let tmp = tempfile::tempdir().unwrap();
    let mut config = fixture(tmp.path());
    config.methods = vec![Method::Naive];
    let report = run_experiment(&config).unwrap();
    let out = tmp.path().join("out");
    emit_report(&report, &out, ReportFormat::Csv).unwrap();
    assert!(read(&out, "mae.csv").starts_with("series,Naive\n"));
    assert_eq!(read(&out, "forecasts_AAA.csv").lines().next(), Some("date,actual,naive"));
    assert!(!out.join("mae.md").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let config = fixture(tmp.path());
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let fa = emit_report(&run_experiment(&config).unwrap(), &a, ReportFormat::Markdown).unwrap();
    let fb = emit_report(&run_experiment(&config).unwrap(), &b, ReportFormat::Markdown).unwrap();
    assert_eq!(fa.len(), fb.len());
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(x.file_name(), y.file_name());
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
    }
}

#[test]
fn coin_flip_series_reproduces_naive() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dates = weekdays(202);
    let exo = walk(&mut rng, dates.len(), 50.0);
    // 100 in-sample steps: follow the exogenous direction on every other one.
    let mut v = vec![20.0];
    for k in 1..dates.len() {
        let up = exo[k] > exo[k - 1];
        let up = if k % 2 == 0 { up } else { !up };
        let size: f64 = rng.random_range(0.1..1.0);
        v.push(v[k - 1] + if up { size } else { -size });
    }
    write_csv(dir, "EXO.csv", "Open", &dates, &exo);
    write_csv(dir, "HALF.csv", "Close", &dates, &v);
    let spec = |name: &str, col: &str| SeriesSpec {
        name: name.into(),
        path: dir.join(format!("{name}.csv")),
        value_column: col.into(),
    };
    let mut config = ExperimentConfig::new(vec![spec("HALF", "Close")], spec("EXO", "Open"));
    config.truncate_length = 202;
    let report = run_experiment(&config).unwrap();
    let r = report.get("HALF").unwrap();
    assert_eq!(r.mpanf.acc_in, 0.5);
    let naive = &r.forecast(Method::Naive).unwrap().predictions;
    let mpanf = &r.forecast(Method::Mpanf).unwrap().predictions;
    assert!(naive.iter().zip(mpanf).all(|(a, b)| a.to_bits() == b.to_bits()));
    assert_eq!(r.eval(Method::Naive), r.eval(Method::Mpanf));
}

#[test]
fn failed_series_are_annotated() {
    let tmp = tempfile::tempdir().unwrap();
    let mut config = fixture(tmp.path());
    config.series.push(SeriesSpec {
        name: "GONE".into(),
        path: tmp.path().join("GONE.csv"),
        value_column: "Close".into(),
    });
    fs::write(tmp.path().join("SHORT.csv"), "Date,Close\n2012-01-03,1\n2012-01-04,2\n").unwrap();
    config.series.push(SeriesSpec {
        name: "SHORT".into(),
        path: tmp.path().join("SHORT.csv"),
        value_column: "Close".into(),
    });
    let report = run_experiment(&config).unwrap();
    let failures: Vec<_> = report.failures().collect();
    assert_eq!(failures.len(), 2);
    assert!(failures[0].1.contains("load"), "{failures:?}");
    assert!(failures[1].1.contains("truncate"), "{failures:?}");

    let out = tmp.path().join("out");
    emit_report(&report, &out, ReportFormat::Csv).unwrap();
    let rmse = read(&out, "rmse.csv");
    assert!(rmse.contains("GONE,failed,failed,failed,failed,failed"));
    assert!(read(&out, "ingestion.csv").contains("failed: "));
    assert!(!out.join("forecasts_GONE.csv").exists());

    let stats = run_stats(&config).unwrap();
    let files = emit_stats(&stats, &tmp.path().join("s"), ReportFormat::Csv).unwrap();
    assert_eq!(files.len(), 2);
}

#[test]
fn missing_exogenous_is_fatal() {
    let tmp = tempfile::tempdir().unwrap();
    let mut config = fixture(tmp.path());
    config.exogenous.path = tmp.path().join("nope.csv");
    assert!(run_experiment(&config).is_err());
}
