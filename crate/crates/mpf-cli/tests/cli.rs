//! End-to-end checks of the `mpf` binary: JSON/CSV shapes and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../mpf/fixtures")
}

#[test]
fn construct_chin_formula() {
    let out = mpf(&["construct", "--order", "6", "--method", "chin"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["alpha"], 2);
    assert_eq!(json["order"], 6);
    assert_eq!(json["exponents"], serde_json::json!([1, 2, 3]));
    assert_eq!(json["coefficients"][1], "-16/15");
}

#[test]
fn construct_chebyshev_real_formula() {
    let out = mpf(&["construct", "--order", "4", "--method", "chebyshev"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let coeffs = json["coefficients"].as_array().unwrap();
    assert_eq!(coeffs.len(), 2);
    let sum: f64 = coeffs.iter().map(|c| c.as_f64().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-12);
}

#[test]
fn construct_rejects_base4_chebyshev() {
    let out = mpf(&["construct", "--order", "4", "--method", "chebyshev", "--base", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn construct_base4_chin() {
    let out = mpf(&["construct", "--order", "8", "--method", "chin", "--base", "4"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["alpha"], 4);
    assert_eq!(json["exponents"], serde_json::json!([1, 2, 3]));
}

#[test]
fn optimize_product_matches_table() {
    let out = mpf(&["optimize", "--m", "3", "--alpha", "2", "--objective", "product"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["exponents"], serde_json::json!([1, 2, 6]));
    assert_eq!(json["a_norm1"], "4/3");
    assert_eq!(json["k_norm1"], 9);
    assert_eq!(json["objective"], "min_a1k1");
    assert_eq!(json["exhaustive"], true);
}

#[test]
fn optimize_capped_matches_table() {
    let out = mpf(&["optimize", "--m", "3", "--alpha", "2", "--objective", "k1cap", "--cap", "2"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["exponents"], serde_json::json!([1, 2, 4]));
    assert_eq!(json["k_norm1"], 7);
}

#[test]
fn verify_tables_passes_bundled_fixtures() {
    for name in ["table_base2.json", "table_base4.json"] {
        let path = fixtures_dir().join(name);
        let out = mpf(&["verify-tables", "--fixtures", path.to_str().unwrap()]);
        assert!(out.status.success(), "{name} failed: {}", stdout(&out));
        assert!(stdout(&out).contains("rows pass"));
    }
}

#[test]
fn verify_tables_flags_corruption_with_exit_2() {
    let content = std::fs::read_to_string(fixtures_dir().join("table_base2.json")).unwrap();
    // Flip the sign of one coefficient of the m=2 row.
    let corrupted = content.replacen("\"-1/3\"", "\"1/3\"", 1);
    assert_ne!(content, corrupted);
    let dir = std::env::temp_dir();
    let path = dir.join("mpf_cli_corrupt_fixture.json");
    std::fs::write(&path, corrupted).unwrap();
    let out = mpf(&["verify-tables", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn cost_single_report_json() {
    let out = mpf(&["cost", "--t-lambda", "10", "--epsilon", "1e-6"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(json["steps_r"].as_u64().unwrap() >= 10);
    assert!(json["u2_queries"].as_u64().unwrap() > 0);
    assert!(json["progmpf_queries"].as_u64().unwrap() <= json["u2_queries"].as_u64().unwrap());
}

#[test]
fn cost_sweep_csv() {
    let out = mpf(&["cost", "--t-lambda", "1,10", "--epsilon", "1e-3,1e-9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t_lambda,epsilon,order,r,u2_queries,progmpf_queries"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn bench_small_sweep_csv() {
    let out = mpf(&[
        "bench", "--sites", "2", "--time", "0.1", "--eps-list", "1e-1,1e-3", "--base", "2",
        "--max-m", "4",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("sites,time,epsilon,formula,"));
    // Two targets, two bottom-half formulas with m ≤ 4.
    assert_eq!(text.lines().count(), 1 + 2 * 2);
    assert!(text.contains("min_k1_capped"));
}

#[test]
fn bench_guards_large_systems() {
    let out = mpf(&["bench", "--sites", "9", "--time", "1", "--eps-list", "1e-2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fig1_csv_columns() {
    let out = mpf(&["fig1", "--max-m", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,order,suzuki_u2_queries,chin_a_norm1,chin_k_norm1,rounded_a_norm1,rounded_k_norm1"
    );
    let row2: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
    assert_eq!(row2[0], "2");
    assert_eq!(row2[2], "5"); // order-4 Suzuki queries
}

#[test]
fn gen_tables_round_trips_through_verify() {
    let dir = std::env::temp_dir();
    let path = dir.join("mpf_cli_regen_base2.json");
    let out = mpf(&[
        "gen-tables", "--base", "2", "--max-m", "4", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let verify = mpf(&["verify-tables", "--fixtures", path.to_str().unwrap()]);
    assert!(verify.status.success());
    assert!(stdout(&verify).contains("all 6 rows pass"));
}

#[test]
fn usage_error_exits_1() {
    let out = mpf(&["construct", "--order", "6", "--method", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    let out = mpf(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = mpf(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
