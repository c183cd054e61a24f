use std::process::{Command, Output};

use serde_json::Value;

fn ssp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssp")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = ssp(&a);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with('\n'));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], "1");
    v
}

#[test]
fn table_markdown_is_default() {
    let out = ssp(&["table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("| 2 ") || l.starts_with("| 3 ") || l.starts_with("| 5 ")).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].ends_with("| 8 | 49 |"));
    assert!(rows[1].ends_with("| 45 |"));
    assert!(rows[2].ends_with("| 47 |"));
}

#[test]
fn table_json_totals_and_tags() {
    let v = json(&["table"]);
    let totals = &v["result"]["totals"];
    assert_eq!(totals["2"]["value"], 49);
    assert_eq!(totals["3"]["value"], 45);
    assert_eq!(totals["5"]["value"], 47);
    for row in v["result"]["rows"].as_array().unwrap() {
        for c in row["columns"].as_array().unwrap() {
            let tag = c["o"]["provenance"].as_str().unwrap();
            assert!(tag == "computed" || tag == "fixture:concluding-table");
        }
    }
}

#[test]
fn json_output_is_deterministic() {
    let a = ssp(&["verify", "--case", "1,2", "--p", "2", "--format", "json"]).stdout;
    let b = ssp(&["verify", "--case", "1,2", "--p", "2", "--format", "json"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(ssp(&["verify", "--case", "3,6", "--p", "2"]).status.code(), Some(0));
    assert_eq!(ssp(&["verify", "--case", "5", "--p", "5"]).status.code(), Some(0));
    assert_eq!(ssp(&["verify", "--case", "7", "--p", "2"]).status.code(), Some(2));
    assert_eq!(ssp(&["verify", "--case", "5", "--p", "5", "--expect", "2"]).status.code(), Some(1));
    assert_eq!(ssp(&["verify", "--case", "x", "--p", "5"]).status.code(), Some(2));
    assert_eq!(ssp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ssp(&["table", "--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn verify_reports_match() {
    let v = json(&["verify", "--case", "3,6", "--p", "2"]);
    assert_eq!(v["result"]["o"]["value"], 8);
    assert_eq!(v["result"]["o"]["provenance"], "computed");
    assert_eq!(v["result"]["match"], true);
    assert_eq!(v["result"]["genera"].as_array().unwrap().len(), 8);
}

#[test]
fn count_falls_back_to_fixture() {
    let v = json(&["count", "--case", "2,3", "--p", "5"]);
    assert_eq!(v["result"]["o"]["value"], 2);
    assert_eq!(v["result"]["o"]["provenance"], "fixture:concluding-table");
}

#[test]
fn precision_flag_is_threaded() {
    let a = json(&["count", "--case", "12", "--p", "2", "--precision", "5"]);
    assert_eq!(a["precision"], 5);
    assert_eq!(a["result"]["o"]["value"], 3);
    assert_eq!(ssp(&["count", "--case", "12", "--p", "2", "--precision", "1"]).status.code(), Some(2));
}

#[test]
fn units() {
    let v = json(&["units", "--p", "2"]);
    assert_eq!(v["result"]["order"]["value"], 24);
    assert_eq!(v["result"]["images"][0]["surjective"], true);
    let v = json(&["units", "--p", "3"]);
    assert_eq!(v["result"]["order"]["value"], 12);
    assert_eq!(v["result"]["images"][0]["target"], "F_9^x");
    assert_eq!(v["result"]["images"][0]["index"]["value"], 2);
    let v = json(&["units", "--p", "5"]);
    assert_eq!(v["result"]["order"]["value"], 6);
    assert_eq!(ssp(&["units", "--p", "7"]).status.code(), Some(2));
}

#[test]
fn hilbert() {
    assert_eq!(json(&["hilbert", "-1", "-1", "2"])["result"]["symbol"]["value"], -1);
    assert_eq!(json(&["hilbert", "-1", "-1", "inf"])["result"]["symbol"]["value"], -1);
    assert_eq!(json(&["hilbert", "-1", "-1", "3"])["result"]["symbol"]["value"], 1);
    assert_eq!(json(&["hilbert", "2", "3/5", "5"])["result"]["symbol"]["value"], -1);
    assert_eq!(ssp(&["hilbert", "0", "1", "2"]).status.code(), Some(2));
    assert_eq!(ssp(&["hilbert", "1", "1", "4"]).status.code(), Some(2));
}
