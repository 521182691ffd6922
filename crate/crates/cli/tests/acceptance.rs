//! One line per acceptance criterion. The E8 coarse grid runs only with
//! `CRYSTGAR_FULL=1` or via the ignored `e8_coarse_table` test.

use std::process::Command;

use crystgar_cli::checks::{self, Check, Status};

fn full() -> bool {
    std::env::var("CRYSTGAR_FULL").is_ok_and(|v| v == "1")
}

#[test]
fn acceptance() {
    let results: Vec<Check> = checks::run_all(full(), 2024);
    println!();
    for c in &results {
        println!("{c}");
    }
    let unexpected: Vec<&str> = results.iter().filter(|c| c.is_unexpected_failure()).map(|c| c.name).collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:?}");

    let chains = results.iter().find(|c| c.name == checks::TRANSLATION_CHAINS).unwrap();
    assert_eq!(chains.status, Status::Fail);
    assert!(chains.expected_failure);
    for c in &results {
        if c.name != checks::TRANSLATION_CHAINS && c.status != Status::Skipped {
            assert_eq!(c.status, Status::Pass, "{c}");
        }
    }
}

#[test]
#[ignore = "long run; enable with --ignored"]
fn e8_coarse_table() {
    for window in [checks::E8_WINDOW, checks::E8_WINDOW + 1] {
        let detail = checks::e8_coarse(window).unwrap();
        println!("[PASS] {}: {detail}", checks::E8_COARSE);
    }
}

#[test]
fn g2_coarse_from_binary() {
    let out = Command::new(env!("CARGO_BIN_EXE_crystgar"))
        .args(["interval", "--type", "G2", "--group", "W", "--coarse", "--out", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = &v["coarse"];
    assert_eq!(rows["top"], serde_json::json!([2, 1]));
    assert_eq!(rows["middle"], serde_json::json!([6, 6]));
    assert_eq!(rows["bottom"], serde_json::json!([1, 2]));
}
