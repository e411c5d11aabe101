//! Command-line contract tests: exit codes, determinism, transitions.

use std::path::Path;
use std::process::Command;

fn invar() -> Command {
    Command::new(env!("CARGO_BIN_EXE_invar"))
}

fn small_config(path: &Path, start_date: &str, seed: u64) {
    let config = serde_json::json!({
        "stock": "SYN",
        "n_firms": 20,
        "n_intervals": 60,
        "horizon": "1d",
        "start_date": start_date,
        "groups": [
            { "fraction": 0.5, "rho": -0.35, "size_scale": 1.0e4 },
            { "fraction": 0.3, "rho": 0.0, "size_scale": 1.0e4 },
            { "fraction": 0.2, "rho": 0.45, "size_scale": 5.0e4 }
        ],
        "return_std": 0.01,
        "seed": seed
    });
    std::fs::write(path, serde_json::to_string(&config).unwrap()).unwrap();
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    entries
}

#[test]
fn unknown_flag_is_usage_error() {
    let status = invar().args(["ingest", "--bogus"]).status().unwrap();
    assert_eq!(status.code(), Some(1));
    let status = invar().arg("frobnicate").status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let status = invar().arg("--help").output().unwrap();
    assert_eq!(status.status.code(), Some(0));
}

#[test]
fn missing_input_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let status = invar()
        .args(["ingest", "--input", "/nonexistent/tape.csv", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn classify_single_firm_is_clean_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let tape = dir.path().join("tape.csv");
    std::fs::write(
        &tape,
        "timestamp,stock,buyer,seller,price,volume\n\
         2001-01-02T10:00:00,TEF,A,_POOL,10.0,100\n\
         2001-01-02T11:00:00,TEF,_POOL,A,10.5,100\n\
         2001-01-03T10:00:00,TEF,A,_POOL,11.0,100\n",
    )
    .unwrap();
    let output = invar()
        .args(["classify", "--input"])
        .arg(&tape)
        .args(["--min-days", "1", "--min-transactions", "1", "--out"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("2 firms"),
        "error should explain the 2-firm requirement: {stderr}"
    );
}

#[test]
fn synth_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    small_config(&config, "2001-01-01", 11);
    let out = dir.path().join("data");
    let run = || {
        let status = invar()
            .args(["synth", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        dir_bytes(&out)
    };
    let a = run();
    let b = run();
    assert_eq!(a.len(), b.len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in a.iter().zip(&b) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "{name_a} differs between runs");
    }
}

#[test]
fn rerunning_a_command_overwrites_with_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    small_config(&config, "2001-01-01", 12);
    let synth_out = dir.path().join("synth");
    assert!(invar()
        .args(["synth", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&synth_out)
        .status()
        .unwrap()
        .success());

    let out = dir.path().join("spectrum");
    let run = || {
        assert!(invar()
            .args(["spectrum", "--input"])
            .arg(synth_out.join("tape_SYN.csv"))
            .args(["--min-days", "10", "--min-transactions", "10"])
            .args(["--shuffles", "5", "--seed", "3"])
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap()
            .success());
        dir_bytes(&out)
    };
    let first = run();
    let second = run();
    assert_eq!(first, second);
}

#[test]
fn transitions_across_two_years() {
    let dir = tempfile::tempdir().unwrap();
    // same firm universe over two consecutive years, concatenated tapes
    let mut tape = String::new();
    for (i, (start, seed)) in [("2001-01-01", 21u64), ("2002-01-07", 22u64)].iter().enumerate() {
        let config = dir.path().join(format!("c{i}.json"));
        small_config(&config, start, *seed);
        let out = dir.path().join(format!("y{i}"));
        assert!(invar()
            .args(["synth", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap()
            .success());
        let year_tape = std::fs::read_to_string(out.join("tape_SYN.csv")).unwrap();
        if i == 0 {
            tape.push_str(&year_tape);
        } else {
            let body = year_tape.split_once('\n').unwrap().1;
            tape.push_str(body);
        }
    }
    let tape_path = dir.path().join("tape.csv");
    std::fs::write(&tape_path, tape).unwrap();

    let out = dir.path().join("out");
    let output = invar()
        .args(["transitions", "--input"])
        .arg(&tape_path)
        .args(["--min-days", "10", "--min-transactions", "10"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "transitions failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.join("transitions_SYN_2001-2002.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["years"], serde_json::json!([2001, 2002]));
    // defined rows are stochastic
    for (row, defined) in report["matrix"]["defined"].as_array().unwrap().iter().enumerate() {
        if defined.as_bool().unwrap() {
            let sum: f64 = report["matrix"]["probs"][row]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_f64().unwrap())
                .sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }
}
