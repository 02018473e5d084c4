use serde_json::Value;
use std::process::{Command, Output};

fn stacky(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stacky"))
        .args(args)
        .output()
        .expect("spawn stacky")
}

fn json(args: &[&str]) -> Value {
    let out = stacky(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn height_of_three_quarters() {
    let v = json(&["height", "--curve", "0:2,inf:2,-1:2", "--anticanonical", "--point", "3/4"]);
    assert_eq!(v["L"], 2);
    assert_eq!(v["value"], "84");
}

#[test]
fn lp_dual_value() {
    let v = json(&["lp", "--m", "2,3,7", "--eps", "1/100"]);
    assert_eq!(v["dual_coefficient"], "29/2100");
    assert_eq!(v["feasible"], true);
    assert_eq!(v["tight"], true);
}

#[test]
fn abc_lists_one_eight_nine() {
    let v = json(&["abc", "--N", "100"]);
    let rows = v.as_array().unwrap();
    assert!(rows.iter().any(|r| r["a"] == 1 && r["b"] == 8 && r["c"] == 9));
    for r in rows {
        assert_eq!(r["a"].as_u64().unwrap() + r["b"].as_u64().unwrap(), r["c"].as_u64().unwrap());
    }
}

#[test]
fn empty_ladder_is_empty_table() {
    let v = json(&["census", "n2", "--T-ladder", ""]);
    assert_eq!(v, Value::Array(vec![]));
}

#[test]
fn json_round_trips() {
    let cases: [&[&str]; 4] = [
        &["height", "--curve", "0:2,inf:3,-1:7", "--canonical", "--point", "3/4"],
        &["lp", "--m", "2,3,7", "--eps", "1/100", "--curve", "0:2,inf:3,-1:7", "--point", "3/4"],
        &["hasse", "--curve", "0:2,inf:2,3:2"],
        &["census", "nm", "--m", "3", "--T-ladder", "2^4..2^8"],
    ];
    for args in cases {
        let out = stacky(args);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&v).unwrap();
        let v2: Value = serde_json::from_str(&again).unwrap();
        assert_eq!(v, v2, "{args:?}");
        assert_eq!(serde_json::to_string_pretty(&v2).unwrap(), again);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let cases: [&[&str]; 3] = [
        &["census", "n2", "--T-ladder", "2^6..2^10"],
        &["abc", "--N", "20000", "--top", "20"],
        &["radical", "--curve", "0:2,inf:3,-1:7", "--B", "60", "--eps", "1/10"],
    ];
    for args in cases {
        let one = stacky(&[&["--threads", "1"], args].concat());
        let four = stacky(&[&["--threads", "4"], args].concat());
        assert!(one.status.success() && four.status.success());
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

#[test]
fn csv_tables() {
    let out = stacky(&["--format", "csv", "census", "nm", "--m", "2", "--T-ladder", "16,32"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(stacky(&["selftest"]).status.code(), Some(0));
    assert_eq!(stacky(&["height", "--curve", "bogus", "--point", "1", "--canonical"]).status.code(), Some(2));
    assert_eq!(stacky(&["lp", "--m", "1,3", "--eps", "0"]).status.code(), Some(2));
    assert_eq!(stacky(&["census", "n2", "--T-ladder", "2^x"]).status.code(), Some(2));
    assert_eq!(stacky(&["height", "--curve", "0:2", "--point", "0", "--canonical"]).status.code(), Some(2));
    if std::path::Path::new("/dev/full").exists() {
        let out = stacky(&["-o", "/dev/full", "abc", "--N", "100000"]);
        assert_eq!(out.status.code(), Some(1));
    }
}
