//! Output format and exit-status behaviour of the `gcap` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn gcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcap")).args(args).output().expect("gcap runs")
}

fn records(out: &Output) -> Vec<Value> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

const FIELDS: [&str; 7] = ["quantity", "method", "value", "stderr_or_tol", "n", "seed", "paper_target"];

#[test]
fn capture_quadrature_record() {
    let out = gcap(&["capture", "--xi", "1", "--method", "quadrature"]);
    let line = String::from_utf8(out.stdout.clone()).unwrap();
    let positions: Vec<_> = FIELDS.iter().map(|f| line.find(&format!("\"{f}\":")).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{line}");
    let r = records(&out);
    assert_eq!(r.len(), 1);
    let r = &r[0];
    assert_eq!(r["method"], "quadrature");
    assert!((r["value"].as_f64().unwrap() - 0.098289).abs() < 1e-6);
    assert_eq!(r["paper_target"].as_f64(), Some(0.098289));
    assert!(r["seed"].is_null());
}

#[test]
fn capture_monte_carlo_at_origin() {
    let r = records(&gcap(&["capture", "--xi", "0", "--method", "mc", "--samples", "1000000", "--seed", "42"]));
    let r = &r[0];
    assert_eq!(r["method"], "monte_carlo");
    assert_eq!(r["seed"], 42);
    assert_eq!(r["n"], 1_000_000);
    let (v, se) = (r["value"].as_f64().unwrap(), r["stderr_or_tol"].as_f64().unwrap());
    assert!((v - 0.25).abs() <= 3.0 * se, "{v} ± {se}");
}

#[test]
fn constants_include_theta() {
    let r = records(&gcap(&["constants"]));
    let theta = r.iter().find(|r| r["quantity"] == "theta").unwrap();
    assert!((theta["value"].as_f64().unwrap() - 0.649_040_687_816_356_3).abs() < 1e-15);
    for rec in &r {
        assert_eq!(rec["method"], "closed_form");
        assert_eq!(rec["n"], 0);
        assert!(rec["paper_target"].is_f64());
    }
}

#[test]
fn csv_format_has_fixed_header() {
    let out = gcap(&["content", "--dim", "2", "--method", "closed-form", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], FIELDS.join(","));
    assert!(lines[1].starts_with("expected_content_2d,closed_form,0.0877398280459"));
    assert_eq!(lines.len(), 2);
}

#[test]
fn monte_carlo_records_carry_seed_and_targets() {
    let r = records(&gcap(&["quad-stats", "--samples", "20000", "--seed", "5", "--workers", "3"]));
    assert!(r.iter().all(|r| r["method"] == "monte_carlo" && r["seed"] == 5));
    let p = r.iter().find(|r| r["quantity"] == "p_quadrilateral").unwrap();
    assert!(p["paper_target"].is_f64());
    let corr = r.iter().find(|r| r["quantity"] == "corr_adjacent_sides").unwrap();
    assert!(corr["paper_target"].is_null());
}

#[test]
fn same_arguments_give_identical_output() {
    let args = ["median", "--dim", "2", "--samples", "50000", "--workers", "4"];
    assert_eq!(gcap(&args).stdout, gcap(&args).stdout);
    let args = ["content-variance", "--samples", "500", "--probes", "200", "--format", "csv"];
    assert_eq!(gcap(&args).stdout, gcap(&args).stdout);
}

#[test]
fn density_grid_and_point() {
    let grid = records(&gcap(&["density", "--grid"]));
    assert_eq!(grid.len(), 2 * 101 + 1);
    let gap = grid.last().unwrap();
    assert_eq!(gap["quantity"], "median_density_sup_gap");
    assert!(gap["value"].as_f64().unwrap() > 0.0);
    let at = records(&gcap(&["density", "--at", "-0.5"]));
    assert_eq!(at[0]["quantity"], "median_density(x=-0.5)");
    let mc = records(&gcap(&["density", "--at", "0", "--method", "mc", "--samples", "100000"]));
    assert_eq!(mc.len(), 1);
    assert!((mc[0]["value"].as_f64().unwrap() - 0.6).abs() < 0.05);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["capture", "--xi", "1", "--bogus"][..],
        &["content", "--dim", "4"],
        &["median", "--dim", "2", "--method", "closed-form"],
        &["density"],
        &["density", "--at", "1", "--grid"],
        &["capture", "--xi", "1", "--tol", "0"],
        &["capture", "--xi", "NaN"],
        &["quad-stats", "--samples", "0"],
    ] {
        let out = gcap(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn unmet_tolerance_exits_with_three() {
    let out = gcap(&["capture", "--xi", "1", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerance not met"));
}
