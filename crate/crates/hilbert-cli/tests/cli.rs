use std::process::{Command, Output};

fn hilb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilb"))
        .args(args)
        .env_remove("HILB_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn analyze_smallest_mixed_point() {
    let o = hilb(&["analyze", "--n", "3", "--n1", "1", "--n2", "2", "--l1", "0", "--l2", "0", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["variety"]["polynomial"], serde_json::json!(["1", "3/2", "1/2"]));
    assert_eq!(v["variety"]["degree"], "1");
    assert_eq!(v["variety"]["genus"], "1");
    assert_eq!(v["variety"]["series"]["pole_order"], 3);
    assert_eq!(v["generator"]["method"], "oracle");
    assert_eq!(v["generator"]["values_only"], true);
}

#[test]
fn analyze_rejects_positive_sum() {
    let o = hilb(&["analyze", "--n", "4", "--n1", "2", "--n2", "2", "--l1", "1", "--l2", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("clause (3)"));
}

#[test]
fn analyze_ratio_three_is_strict() {
    let o = hilb(&["analyze", "--n", "5", "--n1", "2", "--n2", "2", "--l1", "-1", "--l2", "-1", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["generator"]["lc_ratio"], "3");
    assert_eq!(v["generator"]["table_lc_ratio"], "3");
    assert_eq!(v["generator"]["equality"]["verdict"], "strict_inequality");
}

#[test]
fn analyze_top_block_prints_note() {
    let o = hilb(&["analyze", "--n", "3", "--n1", "1", "--n2", "3", "--l1", "2", "--l2", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("note"));
    let o = hilb(&["analyze", "--n", "3", "--n1", "1", "--n2", "3", "--l1", "2", "--l2", "0", "--format", "json"]);
    assert_eq!(json(&o)["notes"].as_array().map(|a| a.len()), Some(1));
}

#[test]
fn analyze_csv_has_one_row_per_k() {
    let o = hilb(&["analyze", "--n", "4", "--n1", "1", "--n2", "2", "--l1", "0", "--l2", "-1", "--k-max", "4", "--format", "csv"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "0,1,series,2,oracle");
    assert_eq!(lines[2], "1,5,series,9,oracle");
}

#[test]
fn output_is_byte_stable() {
    let args = ["analyze", "--n", "5", "--n1", "3", "--n2", "3", "--l1", "-2", "--l2", "1", "--format", "json"];
    assert_eq!(hilb(&args).stdout, hilb(&args).stdout);
}

#[test]
fn budget_exhaustion_emits_partial_report() {
    let o = Command::new(env!("CARGO_BIN_EXE_hilb"))
        .args(["analyze", "--n", "5", "--n1", "2", "--n2", "3", "--l1", "-1", "--l2", "-1", "--format", "json"])
        .env("HILB_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let v = json(&o);
    assert_eq!(v["partial"], true);
    assert_eq!(v["variety"]["degree"], "3");
}

#[test]
fn count_all_methods_agree() {
    let o = hilb(&["count", "h3", "3", "3", "3", "--all-methods"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("164"));
    assert!(s.contains("all methods agree"));
}

#[test]
fn count_examples() {
    assert_eq!(stdout(&hilb(&["count", "p2", "2", "3", "1", "2", "1"])).trim(), "5");
    assert_eq!(stdout(&hilb(&["count", "p3", "4", "1", "2"])).trim(), "6");
    let o = hilb(&["count", "p1", "3", "3", "2", "4", "--all-methods", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["agree"], true);
    assert_eq!(v["values"].as_array().unwrap().len(), 3);
}

#[test]
fn count_exit_codes() {
    assert_eq!(hilb(&["count", "p3", "4", "2", "2", "--method", "formula"]).status.code(), Some(4));
    assert_eq!(hilb(&["count", "h2", "2", "2", "2", "--method", "recursion"]).status.code(), Some(4));
    assert_eq!(hilb(&["count", "h3", "4", "4", "9", "--method", "brute", "--budget", "100"]).status.code(), Some(3));
    assert_eq!(hilb(&["count", "p2", "2", "3", "3", "2", "1"]).status.code(), Some(2));
    assert_eq!(hilb(&["count", "h2", "2", "2"]).status.code(), Some(2));
}

#[test]
fn series_json_uses_strings() {
    let o = hilb(&["series", "h2", "2", "3", "--format", "json", "--trunc", "3"]);
    let v = json(&o);
    assert_eq!(v["series"]["numerator"], serde_json::json!(["1", "2"]));
    assert_eq!(v["series"]["pole_order"], 4);
    assert_eq!(v["expansion"], serde_json::json!(["1", "6", "18", "40"]));
    assert_eq!(v["method"], "series");
}

#[test]
fn table_matches_oracle() {
    let o = hilb(&["table", "--n", "5", "--n1", "3", "--n2", "3", "--l1", "-2", "--l2", "1", "--k-max", "3", "--oracle"]);
    assert!(o.status.success());
    for line in stdout(&o).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], cols[3]);
        assert_eq!(cols[2], "formula");
    }
}

#[test]
fn verify_suites_pass() {
    assert!(hilb(&["verify", "arith"]).status.success());
    let o = hilb(&["verify", "chains", "--max", "3", "--rmax", "4"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["passed"], true);
    assert!(hilb(&["verify", "--suite", "module", "--nmax", "4"]).status.success());
    assert!(hilb(&["verify", "series", "--nmax", "4"]).status.success());
}
