use std::path::PathBuf;

use natframe::{read_ledger, run, RunOutput};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn call(args: &[&str]) -> RunOutput {
    run(&args.iter().map(|s| s.to_string()).collect::<Vec<_>>())
}

fn results(out: &RunOutput) -> Value {
    let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out));
    v["results"].clone()
}

fn without_timing(out: &RunOutput) -> Value {
    let mut v: Value = serde_json::from_str(&out.stdout).unwrap();
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn certify_shipped_six_two_certificate() {
    let out = call(&["certify", &fixture("6_2.json"), &fixture("6_2_cert1.json")]);
    assert_eq!(out.code, 0, "{out:?}");
    let r = results(&out);
    assert_eq!(r["m"], 4);
    assert_eq!(r["ok"], true);
}

#[test]
fn certify_marked_text_and_failure() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    // torus (3,2) at its minimum: x_0 x_0 and the two inverse letters of the tail deleted
    let neg = results(&call(&["torus", "--p", "3", "--q", "2"]))["negative_decomposition"]["marked"]
        .as_str()
        .unwrap()
        .to_string();
    std::fs::write(&good, &neg).unwrap();
    let out = call(&["certify", "torus:3,2", good.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{out:?}");
    assert_eq!(results(&out)["m"], 2);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, neg.replacen('_', "", 1)).unwrap();
    let out = call(&["certify", "torus:3,2", bad.to_str().unwrap()]);
    assert_eq!(out.code, 1, "{out:?}");
    assert_eq!(results(&out)["ok"], false);
}

#[test]
fn torus_five_three() {
    let out = call(&["torus", "--p", "5", "--q", "3"]);
    assert_eq!(out.code, 0);
    let r = results(&out);
    assert_eq!(r["nu"], -8);
    let neg = &r["negative_decomposition"];
    assert_eq!(neg["m"], 8);
    assert_eq!(neg["check"]["ok"], true);
    assert_eq!(neg["product_is_longitude"], true);
    for v in r["values"].as_array().unwrap() {
        assert_eq!(v["certificate"]["m"], v["n"]);
        assert_eq!(v["certificate"]["ok"], true);
    }
}

#[test]
fn torus_window_flag() {
    let out = call(&["--window", "-12,12", "torus", "--p", "3", "--q", "2"]);
    assert_eq!(out.code, 0);
    assert_eq!(results(&out)["window_nu"], "-2");
}

#[test]
fn table_row_and_full() {
    let out = call(&["table", "4_1"]);
    assert_eq!(out.code, 0);
    assert_eq!(results(&out)["natural_framing"], "0");
    let out = call(&["table"]);
    assert_eq!(out.code, 0);
    assert_eq!(results(&out)["rows"].as_array().unwrap().len(), 14);
    assert_eq!(call(&["table", "9_42"]).code, 2);
}

#[test]
fn search_finds_clasp_and_unknot() {
    let out = call(&["search", "unknot", "--k", "0"]);
    assert_eq!(out.code, 0);
    assert_eq!(results(&out)["m"], 0);
    // 5_2 from the built-in fraction has its clasp at negative framing
    let out = call(&["search", "5_2", "--k", "-2"]);
    assert_eq!(out.code, 0);
    assert_eq!(results(&out)["m"], 2);
    assert_eq!(results(&out)["check"]["ok"], true);
}

#[test]
fn search_writes_a_certificate_that_certifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = call(&["search", "4_1", "--k", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let out = call(&["certify", "4_1", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{out:?}");
    assert_eq!(results(&out)["m"], 2);
}

#[test]
fn search_without_certificate_is_unknown() {
    let out = call(&["search", "3_1", "--k", "0", "--max-m", "2"]);
    assert_eq!(out.code, 3);
    assert_eq!(results(&out)["found"], false);
}

#[test]
fn present_forms() {
    let out = call(&["present", "--torus", "3,2"]);
    assert_eq!(out.code, 0);
    let r = results(&out);
    assert_eq!(r["kind"], "torus");
    assert_eq!(r["determinant"], 3);
    let out = call(&["present", "--two-bridge", "5/2", "--k", "0"]);
    assert_eq!(results(&out)["determinant"], 5);
    assert_eq!(results(&out)["longitude"]["k"], 0);
    let out = call(&["present", "--braid", "s1 s1 s1"]);
    assert_eq!(results(&out)["determinant"], 3);
    assert_eq!(call(&["present"]).code, 2);
    assert_eq!(call(&["present", "3_1", "--torus", "3,2"]).code, 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    assert_eq!(call(&["present", "7_7", "--out", path.to_str().unwrap()]).code, 0);
    let out = call(&["certify", path.to_str().unwrap(), &fixture("7_7_cert1.json")]);
    assert_eq!(out.code, 0, "{out:?}");
}

#[test]
fn nu_and_convolve() {
    let dir = tempfile::tempdir().unwrap();
    let w = |p: &str, q: &str, name: &str| {
        let out = call(&["--window", "-16,16", "torus", "--p", p, "--q", q]);
        let path = dir.path().join(name);
        std::fs::write(&path, results(&out)["window"].to_string()).unwrap();
        path.to_string_lossy().into_owned()
    };
    let a = w("3", "2", "a.json");
    let b = w("5", "2", "b.json");
    let out = call(&["nu", &a]);
    assert_eq!(out.code, 0);
    assert_eq!(results(&out)["natural_framing"], "-2");
    assert_eq!(results(&out)["knottedness"], serde_json::json!([2, 2]));

    let sum = dir.path().join("sum.json");
    let out = call(&["convolve", &a, &b, "--out", sum.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert_eq!(results(&out)["natural_framing"], "-6");
    assert_eq!(results(&call(&["nu", sum.to_str().unwrap()]))["natural_framing"], "-6");

    let sparse = dir.path().join("sparse.json");
    std::fs::write(&sparse, r#"[{"k": 0, "upper": 4, "provenance": ["upper:note"]}]"#).unwrap();
    assert_eq!(call(&["convolve", &a, sparse.to_str().unwrap()]).code, 1);
    std::fs::write(&sparse, "not json").unwrap();
    assert_eq!(call(&["nu", sparse.to_str().unwrap()]).code, 2);
}

#[test]
fn usage_errors() {
    for args in [
        &["bogus"][..],
        &["torus", "--p", "4", "--q", "2"],
        &["torus", "--p", "3"],
        &["--window", "5,1", "table"],
        &["--format", "xml", "table", "3_1"],
        &["certify", "3_1", "/nonexistent/cert.json"],
        &["search", "nonsense", "--k", "0"],
    ] {
        let out = call(args);
        assert_eq!(out.code, 2, "{args:?}: {out:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = call(&["torus", "--p", "4", "--q", "2"]);
    assert!(out.stderr.contains("--p"), "{}", out.stderr);
    assert_eq!(call(&["--help"]).code, 0);
}

#[test]
fn reports_are_deterministic() {
    for args in [&["table"][..], &["torus", "--p", "7", "--q", "3"], &["search", "4_1", "--k", "-2"]] {
        let a = call(args);
        let b = call(args);
        assert_eq!(without_timing(&a), without_timing(&b), "{args:?}");
        let va: Value = serde_json::from_str(&a.stdout).unwrap();
        let vb: Value = serde_json::from_str(&b.stdout).unwrap();
        assert_eq!(va["digest"], vb["digest"]);
    }
}

#[test]
fn text_format() {
    let out = call(&["--format", "text", "table", "3_1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.lines().any(|l| l.starts_with("3_1") && l.contains("certified")), "{}", out.stdout);
    assert!(out.stdout.contains("digest: "));
}

#[test]
fn experiment_is_idempotent_and_checks_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("exp.json");
    std::fs::write(
        &spec,
        r#"{"cells": [{"presentation": "unknot", "k": 0}, {"presentation": "two-bridge:7/5", "k": 2, "max_m": 2}],
            "properties": {"cases": 10}}"#,
    )
    .unwrap();
    let spec = spec.to_str().unwrap();
    let out = call(&["experiment", spec]);
    assert_eq!(out.code, 0, "{out:?}");
    let r = results(&out);
    assert_eq!(r["new"].as_array().unwrap().len(), 3);
    let ledger_path = format!("{spec}.ledger.jsonl");
    let text = std::fs::read_to_string(&ledger_path).unwrap();
    let records = read_ledger(&text).unwrap();
    let by_cell = |c: &str| records.iter().find(|r| r.cell == c).unwrap().clone();
    assert_eq!(by_cell("unknot/k=0").outcome, "certificate");
    assert_eq!(by_cell("unknot/k=0").payload["m"], 0);
    // mirror of the built-in 5_2, so the clasp sits at k = 2
    assert_eq!(by_cell("two-bridge:7/5/k=2").payload["m"], 2);
    assert_eq!(by_cell("properties/seed=0").outcome, "passed");
    let cells: Vec<&str> = records.iter().map(|r| r.cell.as_str()).collect();
    let mut sorted = cells.clone();
    sorted.sort();
    assert_eq!(cells, sorted);

    let again = call(&["experiment", spec]);
    assert_eq!(again.code, 0);
    assert_eq!(results(&again)["new"].as_array().unwrap().len(), 0);
    assert_eq!(results(&again)["skipped"], 3);
    assert_eq!(std::fs::read_to_string(&ledger_path).unwrap(), text);

    let corrupt = text.replacen("\"m\":0", "\"m\":1", 1);
    assert_ne!(corrupt, text);
    std::fs::write(&ledger_path, corrupt).unwrap();
    let out = call(&["experiment", spec]);
    assert_eq!(out.code, 1);
    assert!(results(&out)["error"].as_str().unwrap().contains("checksum"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_natframe");
    let status = std::process::Command::new(bin).args(["table", "4_1"]).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&status.stdout).unwrap();
    assert_eq!(v["results"]["natural_framing"], "0");
    let status = std::process::Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}
