use std::process::{Command, Output};

fn bellwalk(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bellwalk"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("BELLWALK_THREADS", n),
        None => cmd.env_remove("BELLWALK_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn output_is_identical_across_thread_counts() {
    let args = ["epower", "--coin", "p2", "--T", "12"];
    let one = bellwalk(&args, Some("1"));
    let four = bellwalk(&args, Some("4"));
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let again = bellwalk(&["simulate", "--coin", "1/6,1/8,0.3", "--T", "15"], None);
    let repeat = bellwalk(&["simulate", "--coin", "1/6,1/8,0.3", "--T", "15"], None);
    assert_eq!(again.stdout, repeat.stdout);
}

#[test]
fn closed_form_check_passes() {
    let o = bellwalk(&["check-closed-form", "--T", "30", "--format", "json"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["data"]["pass"], true);
    assert!(doc["data"]["maxAbsDiff"].as_f64().unwrap() < 1e-10);
    assert_eq!(doc["meta"]["command"], "check-closed-form");
}

#[test]
fn entropy_series_starts_unentangled_and_stays_bounded() {
    let o = bellwalk(&["entropy-series", "--coin", "p1", "--T", "200"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("t,value"));
    let values: Vec<f64> = rows.map(|r| r.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 201);
    assert!(values[0].abs() < 1e-12);
    assert!(values.iter().all(|&v| (-1e-12..=std::f64::consts::LN_2 + 1e-12).contains(&v)));
    let tail: f64 = values[100..].iter().sum::<f64>() / 101.0;
    assert!((tail - std::f64::consts::LN_2).abs() < 1e-2, "tail mean {tail}");
}

#[test]
fn fit_reads_its_own_series() {
    let dir = std::env::temp_dir().join(format!("bellwalk-fit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let series = dir.join("series.csv");
    let o = bellwalk(&["entropy-series", "--T", "120", "--output", series.to_str().unwrap()], None);
    assert!(o.status.success());
    let fitted = bellwalk(
        &["fit", "--input", series.to_str().unwrap(), "--basis-preset", "p1", "--format", "json"],
        None,
    );
    assert!(fitted.status.success(), "{}", String::from_utf8_lossy(&fitted.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&fitted)).unwrap();
    assert_eq!(doc["data"]["window"], serde_json::json!([60, 120]));
    assert!(doc["data"]["constant"].as_f64().unwrap().is_finite());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(bellwalk(&["simulate", "--coin", "2,0"], None).status.code(), Some(2));
    assert_eq!(bellwalk(&["renyi", "--alpha", "1"], None).status.code(), Some(2));
    assert_eq!(bellwalk(&["epower", "--T", "2"], Some("zero")).status.code(), Some(2));
    let div = bellwalk(&["renyi", "--coin", "0,1/4,0", "--spin", "1,0,0,0", "--T", "3"], None);
    assert_eq!(div.status.code(), Some(4));
    // flagged rows are still written, with empty cells
    assert!(stdout(&div).lines().any(|l| l == "1,,"));
    assert!(stdout(&div).lines().any(|l| l == "3,,"));
    let strict = bellwalk(&["check-closed-form", "--T", "10", "--tolerance", "1e-30"], None);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn continuum_check_passes() {
    let o = bellwalk(&["continuum-check"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass,true"));
}
