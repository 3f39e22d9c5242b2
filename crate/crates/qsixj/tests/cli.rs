//! End-to-end tests of the `qsixj` binary.

use std::process::{Command, Output};

fn qsixj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsixj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn tet_text_output() {
    let out = qsixj(&["tet", "-a", "1", "-b", "1", "-c", "1", "-d", "1", "-j", "2", "-l", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1.500000000000e0"), "{text}");
    assert!(text.contains("oracle"), "{text}");
}

#[test]
fn rw_known_value() {
    let out = qsixj(&["rw", "2", "2", "2", "0", "2", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("-3.333333333333e-1"), "{text}");
}

#[test]
fn json_lines_round_trip() {
    let out = qsixj(&[
        "column", "-a", "4", "-b", "4", "-c", "4", "-d", "4", "-l", "4", "--method",
        "recurrence", "--format", "json", "--q", "root:10",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut rows = 0usize;
    let mut last_j = i64::MIN;
    for line in text.lines() {
        let rec: serde_json::Value = serde_json::from_str(line).expect("valid json line");
        for key in ["a", "b", "c", "d", "j", "l", "sign", "logmag", "value", "cancel_digits", "method"] {
            assert!(rec.get(key).is_some(), "missing {key} in {line}");
        }
        let j = rec["j"].as_i64().unwrap();
        assert!(j > last_j, "output not sorted by j: {text}");
        last_j = j;
        // (sign, logmag) must reproduce the decimal value. Exact zeros
        // carry sign 0 and a null logmag (-inf is not valid JSON).
        let sign = rec["sign"].as_i64().unwrap() as f64;
        let value = rec["value"].as_f64().unwrap();
        if sign == 0.0 {
            assert!(rec["logmag"].is_null(), "{line}");
            assert_eq!(value, 0.0, "{line}");
        } else {
            let logmag = rec["logmag"].as_f64().unwrap();
            let recon = sign * logmag.exp();
            assert!(
                (recon - value).abs() <= 1e-12 * value.abs().max(1e-300),
                "sign/logmag {recon} vs value {value}"
            );
        }
        assert_eq!(rec["method"].as_str().unwrap(), "recurrence");
        rows += 1;
    }
    assert!(rows >= 2, "expected several rows, got {rows}:\n{text}");
}

#[test]
fn verify_exits_zero() {
    let out = qsixj(&["verify", "--max-label", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verify: OK"));
}

#[test]
fn invalid_label_exits_two() {
    let out = qsixj(&[
        "column", "-a", "9", "-b", "1", "-c", "1", "-d", "9", "-l", "0", "--q", "root:5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("error:"), "{err}");
}

#[test]
fn invalid_regime_exits_two() {
    let out = qsixj(&["tet", "-a", "0", "-b", "0", "-c", "0", "-d", "0", "-j", "0", "-l", "0", "--q", "root:xyz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_qsixj"))
        .env("QSIXJ_THREADS", "1")
        .args(["table", "-a", "3", "-b", "3", "-c", "3", "-d", "3", "--format", "csv"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = stdout(&out);
    // header + 4x4 table rows
    assert_eq!(text.lines().count(), 17, "{text}");
}

#[test]
fn methods_agree_on_the_cli() {
    let mut values = Vec::new();
    for method in ["oracle", "recurrence", "eigen"] {
        let out = qsixj(&[
            "kl", "-a", "2", "-b", "2", "-c", "2", "-d", "2", "-j", "2", "-l", "2",
            "--method", method, "--format", "csv",
        ]);
        assert!(out.status.success(), "{method}");
        let text = stdout(&out);
        let row = text.lines().nth(1).unwrap();
        let value: f64 = row.split(',').nth(8).unwrap().parse().unwrap();
        values.push(value);
    }
    assert!((values[0] - values[1]).abs() < 1e-12 * values[0].abs());
    assert!((values[0] - values[2]).abs() < 1e-12 * values[0].abs());
}
