use std::process::Command;

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_crystgar")).args(args).env_remove("CRYSTGAR_CACHE_DIR").output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn ncb_count() {
    assert_eq!(run(&["ncb", "--n", "5", "--count", "--out", "json"]).trim(), r#"{
  "count": 252,
  "n": 5
}"#);
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["interval", "--type", "B3", "--coarse", "--poset", "--out", "json"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
}

#[test]
fn cached_report_matches_fresh_build() {
    let dir = std::env::temp_dir().join(format!("crystgar-cli-test-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let args = ["interval", "--type", "C2", "--group", "c", "--coarse", "--out", "json"];
    let fresh = run(&args);
    let miss = run(&[&args[..], &["--cache-dir", d]].concat());
    let hit = run(&[&args[..], &["--cache-dir", d]].concat());
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(fresh, miss);
    assert_eq!(miss, hit);
}

#[test]
fn bad_type_is_reported() {
    let out = Command::new(env!("CARGO_BIN_EXE_crystgar")).args(["roots", "--type", "Q7"]).output().unwrap();
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}
