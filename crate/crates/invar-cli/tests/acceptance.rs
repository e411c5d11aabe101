//! Acceptance criterion 8, pipeline half: `full` over a synthetic year
//! (70 firms, 250 trading days, 15-minute grid = 8500 intervals) completes
//! inside two minutes and emits every report artifact.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

fn invar() -> Command {
    Command::new(env!("CARGO_BIN_EXE_invar"))
}

fn write_year_config(path: &Path) {
    let config = serde_json::json!({
        "stock": "SYN",
        "n_firms": 70,
        "n_intervals": 8500,
        "horizon": "15m",
        "start_date": "2001-01-01",
        "groups": [
            { "fraction": 0.5, "rho": -0.3, "size_scale": 1.0e4 },
            { "fraction": 0.4, "rho": 0.0, "size_scale": 1.0e4 },
            { "fraction": 0.1, "rho": 0.4, "size_scale": 1.0e5 }
        ],
        "return_std": 0.01,
        "responder_lag": 1,
        "initial_price": 100.0,
        "seed": 20010101
    });
    std::fs::write(path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
}

#[test]
fn acceptance_08_full_pipeline_on_synthetic_year() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("year.json");
    write_year_config(&config_path);

    let synth_out = dir.path().join("synth");
    let status = invar()
        .args(["synth", "--config"])
        .arg(&config_path)
        .arg("--out")
        .arg(&synth_out)
        .status()
        .unwrap();
    assert!(status.success(), "synth failed");
    let tape = synth_out.join("tape_SYN.csv");
    assert!(tape.exists());

    let full_out = dir.path().join("full");
    let start = Instant::now();
    let output = invar()
        .args(["full", "--input"])
        .arg(&tape)
        .args(["--stock", "SYN", "--year", "2001", "--horizon", "15m"])
        .args(["--shuffles", "100", "--seed", "42"])
        .arg("--out")
        .arg(&full_out)
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    assert!(
        output.status.success(),
        "full failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "full took {elapsed:.2?}, budget 2min"
    );

    let expected = [
        "panel_SYN_2001_15m.csv",
        "panel_SYN_2001_15m.meta.json",
        "panel_SYN_2001_1d.csv",
        "returns_SYN_2001_15m.csv",
        "returns_SYN_2001_1d.csv",
        "spectrum_SYN_2001_1d.json",
        "spectrum_matrix_SYN_2001_1d.csv",
        "classify_SYN_2001_1d.csv",
        "classify_sorted_matrix_SYN_2001_1d.csv",
        "causality_lags_SYN_2001_15m.csv",
        "causality_integrated_SYN_2001_15m.csv",
        "herding_ledger_SYN_2001_15m.csv",
        "herding_ledger_SYN_2001_1d.csv",
        "herding_summary_SYN_2001_15m.json",
        "herding_summary_SYN_2001_1d.json",
        "timeline_SYN_2001.csv",
    ];
    for name in expected {
        assert!(full_out.join(name).exists(), "missing artifact {name}");
    }

    // the spectrum report must separate the first eigenvalue from both nulls
    let spectrum: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(full_out.join("spectrum_SYN_2001_1d.json")).unwrap())
            .unwrap();
    let l1 = spectrum["eigenvalues"][0].as_f64().unwrap();
    let l2 = spectrum["eigenvalues"][1].as_f64().unwrap();
    let rmt = spectrum["thresholds"]["rmt_lambda_max"].as_f64().unwrap();
    let shuffle = spectrum["thresholds"]["shuffle_lambda_max"].as_f64().unwrap();
    assert!(l1 > rmt && l1 > shuffle, "lambda1 {l1} vs rmt {rmt}, shuffle {shuffle}");
    assert!(l2 < rmt && l2 < shuffle, "lambda2 {l2} should stay inside");

    // classification sees 8500 intervals' worth of trades: the census
    // should be dominated by reversing firms with a trending minority
    let classify = std::fs::read_to_string(full_out.join("classify_SYN_2001_1d.csv")).unwrap();
    let labels: Vec<&str> = classify
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(5).unwrap())
        .collect();
    assert_eq!(labels.len(), 70);
    let reversing = labels.iter().filter(|l| **l == "Reversing").count();
    let trending = labels.iter().filter(|l| **l == "Trending").count();
    assert!(
        (30..=40).contains(&reversing),
        "expected about 35 reversing firms, got {reversing}"
    );
    assert!(
        (4..=10).contains(&trending),
        "expected about 7 trending firms, got {trending}"
    );

    eprintln!("[acceptance] 8 full pipeline: PASS ({elapsed:.2?})");
}
