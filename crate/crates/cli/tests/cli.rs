//! End-to-end checks of the command-line surface: flag handling, file
//! formats, and the documented exit codes.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperweight"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn build_reports_the_degenerate_binary_code() {
    let out = run(&[
        "build", "--family", "affine", "--q", "2", "--s", "3", "--d", "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 1);
    assert_eq!(v["k"], 1);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn build_emits_generator_csv() {
    let dir = std::env::temp_dir().join(format!("hyperweight-csv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gen.csv");
    let out = run(&[
        "build",
        "--family",
        "projective",
        "--q",
        "3",
        "--s",
        "2",
        "--d",
        "1",
        "--emit-generator",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    // k = 2 rows of n = 2 entries, canonical integer reps, no header.
    assert_eq!(csv, "1,0\n0,1\n");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn ghw_both_reports_sources_and_exits_zero() {
    let out = run(&[
        "ghw", "--family", "affine", "--q", "3", "--s", "3", "--d", "1", "--r-max", "2",
        "--method", "both", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["hierarchy"]["1"], 4);
    assert_eq!(v["hierarchy"]["2"], 6);
    assert!(v["formula"]["1"]["source"]
        .as_str()
        .unwrap()
        .contains("Thm 2.2"));
    assert!(v["formula"]["2"]["source"]
        .as_str()
        .unwrap()
        .contains("Cor 4.2"));
}

#[test]
fn zeros_counts_from_a_polynomial_file() {
    let dir = std::env::temp_dir().join(format!("hyperweight-zeros-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("polys.json");
    // t1 - t2 and t1 - t3 over F_3 in three variables: zeros where a = b = c.
    std::fs::write(
        &path,
        r#"[
            {"s":3,"terms":[{"exps":[1,0,0],"coeff":1},{"exps":[0,1,0],"coeff":2}]},
            {"s":3,"terms":[{"exps":[1,0,0],"coeff":1},{"exps":[0,0,1],"coeff":2}]}
        ]"#,
    )
    .unwrap();
    let out = run(&[
        "zeros", "--q", "3", "--s", "3", "--polys", path.to_str().unwrap(), "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["common_zeros"], 2);
    assert_eq!(v["points"], 8);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn dual_check_passes_both_sides() {
    let out = run(&["dual-check", "--q", "3", "--s", "4", "--d", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("k=10, n=16"));
    let out = run(&["dual-check", "--q", "3", "--s", "3", "--d", "1", "--projective"]);
    assert!(out.status.success());
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["build", "--family", "nonsense", "--q", "3", "--s", "3", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["ghw", "--family", "affine", "--q", "6", "--s", "3", "--d", "1", "--r-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_overruns_exit_three() {
    let out = bin()
        .env("HYPERWEIGHT_BUDGET", "10")
        .args([
            "ghw", "--family", "affine", "--q", "3", "--s", "3", "--d", "1", "--r-max", "2",
            "--format", "json",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
    // The partial report still names the required budget.
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["truncated"]["budget"], 10);
}

#[test]
fn verify_table_prints_pass_lines() {
    let out = run(&["verify", "--suite", "duals", "--q-max", "3", "--s-max", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("PASS")));
    assert!(text.contains("failed=0"));
}
