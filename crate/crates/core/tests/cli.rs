use std::process::Command;

use nilcpa_core::format::AlgebraFile;
use nilcpa_core::liealg::catalog::catalog;
use nilcpa_core::LieAlgebraTable;
use serde_json::Value;

fn nilcpa(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nilcpa")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out) = nilcpa(&full);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}")))
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let runs: [&[&str]; 5] = [
        &["--seed", "7", "property-f", "g_6_14"],
        &["--seed", "3", "property-f", "F_2_3_hall"],
        &["cpa-solve", "h3"],
        &["conjecture", "--cmax", "6"],
        &["grid", "F_3_2"],
    ];
    for args in runs {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let a = nilcpa(&full);
        let b = nilcpa(&full);
        assert_eq!(a, b, "{args:?}");
        let threaded: Vec<&str> = ["--threads", "2"].iter().copied().chain(full.iter().copied()).collect();
        assert_eq!(nilcpa(&threaded), a, "{args:?} with 2 threads");
        let v: Value = serde_json::from_str(&a.1).unwrap();
        assert!(v.get("verdict").is_some(), "{args:?}");
    }
}

#[test]
fn catalog_entries_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["h3", "h5", "n4", "n6", "a2", "g_6_14", "F_2_3_hall", "F_3_2_hall", "F_3_3_hall", "F_2_5", "F_3_3"] {
        let (code, text) = nilcpa(&["catalog", "export", name]);
        assert_eq!(code, 0, "{name}");
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, &text).unwrap();
        let file: AlgebraFile = serde_json::from_str(&text).unwrap();
        let table = LieAlgebraTable::from_file(&file).unwrap();
        table.validate().unwrap();
        assert_eq!(table, catalog(name).unwrap().table, "{name}");

        let (code, from_file) = json(&["info", path.to_str().unwrap()]);
        let (_, from_name) = json(&["info", name]);
        assert_eq!(code, 0);
        assert_eq!(from_file, from_name, "{name}");
    }
}

#[test]
fn build_output_is_an_algebra_file() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = nilcpa(&["build", "3", "3"]);
    assert_eq!(code, 0);
    let path = dir.path().join("f33.json");
    std::fs::write(&path, &text).unwrap();
    let (_, info) = json(&["info", path.to_str().unwrap()]);
    assert_eq!(info["dim"], 14);
    assert_eq!(info["center_dim"], 8);
    assert_eq!(info["lower_central_quotient_dims"], serde_json::json!([3, 3, 8]));
}

#[test]
fn dims_output() {
    let (code, out) = nilcpa(&["dims", "2", "10"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("2,3,5,8,14,23,41,71,127,226"));
    let (_, v) = json(&["dims", "3", "3"]);
    assert_eq!(v["dim"], "14");
    assert_eq!(v["center_dim"], "8");
}

#[test]
fn cpa_verify_reads_product_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"products": [[1, 1, [[2, "1"]]], [1, 2, [[3, "1"]]]]}"#).unwrap();
    let (code, v) = json(&["cpa-verify", "h3", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["report"]["is_central"], false);
    assert_eq!(v["report"]["is_complete"], true);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"products": [[1, 1, [[1, "1"]]]]}"#).unwrap();
    let (code, v) = json(&["cpa-verify", "h3", bad.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "no");

    let malformed = dir.path().join("malformed.json");
    std::fs::write(&malformed, r#"{"products": [[2, 1, []]]}"#).unwrap();
    assert_eq!(nilcpa(&["cpa-verify", "h3", malformed.to_str().unwrap()]).0, 1);
    assert_eq!(nilcpa(&["cpa-verify", "h3", "/nonexistent/p.json"]).0, 1);
}

#[test]
fn exit_codes() {
    assert_eq!(nilcpa(&["info", "h4"]).0, 1);
    assert_eq!(nilcpa(&["property-f", "F_3_2"]).0, 1);
    assert_eq!(nilcpa(&["grid", "h3"]).0, 1);
    assert_eq!(nilcpa(&["conjecture", "--cmax", "2"]).0, 1);
    assert_eq!(nilcpa(&["catalog", "list"]).0, 0);
    let (code, v) = json(&["property-f", "n4"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "false");
}
