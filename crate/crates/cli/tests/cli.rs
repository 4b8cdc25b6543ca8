use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn tqft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tqft"))
        .args(args)
        .output()
        .expect("spawn tqft")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = tqft(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn group_classes() {
    let v = json(&["group", "--preset", "S3", "classes"]);
    assert_eq!(v["schema"], "tqft/1");
    assert_eq!(v["class_sizes"], serde_json::json!([1, 3, 2]));
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
}

#[test]
fn dw_torus_exact_and_decimal() {
    let v = json(&["dw", "--group", "Z2", "--genus", "1"]);
    assert_eq!(v["count"], "4");
    assert_eq!(v["value"]["value"], "2");
    assert_eq!(v["value"]["decimal"], 2.0);
    for method in ["brute", "character"] {
        let w = json(&["dw", "--group", "S3", "--genus", "2", "--method", method]);
        assert_eq!(w["value"]["value"], "81");
    }
    let b = json(&["dw", "--group", "S3", "--genus", "0", "--boundary", "1,1"]);
    assert_eq!(b["value"]["value"], b["frobenius"]["value"]);
}

#[test]
fn trivial_double() {
    let v = json(&["double", "--group", "trivial", "--emit", "s,t,c,dims"]);
    assert_eq!(v["s"], serde_json::json!([[[1.0, 0.0]]]));
    assert_eq!(v["rank"], 1);
}

#[test]
fn double_s3_fusion_and_genus() {
    let v = json(&["double", "--group", "S3", "--emit", "fusion,dims", "--genus", "2"]);
    assert_eq!(v["rank"], 8);
    assert_eq!(v["verlinde"]["integer"], 116);
    assert_eq!(v["burnside"], "116");
}

#[test]
fn chartable_shape() {
    let v = json(&["chartable", "--group", "S3"]);
    assert_eq!(v["dims"], serde_json::json!([1, 1, 2]));
    assert_eq!(v["chi"].as_array().unwrap().len(), 3);
    assert_eq!(v["chi"][0][0], serde_json::json!([1.0, 0.0]));
}

#[test]
fn frob_and_cob() {
    let alg = r#"{"semisimple": [1, 2]}"#;
    let f = json(&["frob", "--algebra", alg, "--genus", "2"]);
    assert_eq!(f["dim"], 2);
    assert_eq!(f["semisimple"], true);
    // ε(ω²) = 1/1 + 1/2
    assert_eq!(f["genus_invariants"][2]["value"][0], 1.5);
    let c = json(&["cob", "eval", "--text", "cap;copants;pants;cup", "--algebra", alg]);
    assert_eq!(c["shape"], serde_json::json!([1, 1]));
    let r = json(&["cob", "relations", "--algebra", alg]);
    assert!(r["max_defect"].as_f64().unwrap() < 1e-9);
}

#[test]
fn word_file() {
    let dir = std::env::temp_dir().join(format!("tqft-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("word.txt");
    std::fs::File::create(&path)
        .unwrap()
        .write_all(b"cap\ncopants\nid id\npants\ncup\n")
        .unwrap();
    let v = json(&["cob", "eval", "--word", path.to_str().unwrap(), "--algebra", r#"{"class_functions_of": "Z2"}"#]);
    assert_eq!(v["shape"], serde_json::json!([1, 1]));
}

#[test]
fn openclosed_cardy() {
    let v = json(&["openclosed", "cardy", "--traces", "1,4,9", "--k", "2,1,3", "--signs", "+,-,+"]);
    assert!(v["cardy_defect"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["open_dim"], 14);
    let k = json(&["openclosed", "k0", "--traces", "1,4,9"]);
    assert_eq!(k["k0"], "Z^3");
}

#[test]
fn lattice_shuffle() {
    let v = json(&["lattice", "--surface", "genus:2", "--group", "S3", "--shuffle", "20", "--seed", "7"]);
    assert_eq!(v["value"]["value"], "9/4");
    assert_eq!(v["shuffle"]["invariant"], true);
    let c = json(&["lattice", "--surface", "cylinder", "--group", "S3", "--projector"]);
    assert_eq!(c["projector_rank"], 3);
}

#[test]
fn ym_outputs() {
    let v = json(&["ym", "--spectrum", "su2", "--genus", "2", "--area", "0.1", "--nmax", "2000"]);
    assert!(v["value"].as_f64().unwrap() < std::f64::consts::PI.powi(2) / 6.0);
    assert!(v["tail_bound"].as_f64().is_some());
    let f = json(&["ym", "--spectrum", "S3", "--genus", "2", "--area", "3"]);
    assert_eq!(f["value"], 2.25);
    let out = tqft(&["ym", "--genus", "1", "--area", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn su2k_sign() {
    let v = json(&["su2k", "--level", "5", "--emit", "t,fusion"]);
    assert_eq!(v["rank"], 6);
    assert!(v["relations"]["st_cubed"].as_f64().unwrap() < 1e-8);
}

#[test]
fn user_errors_exit_2() {
    for args in [
        vec!["bogus"],
        vec!["dw", "--group", "W5", "--genus", "1"],
        vec!["dw", "--group", r#"{"cayley": [[0,1],[1,1]]}"#, "--genus", "1"],
        vec!["dw", "--group", "/nonexistent/group.json", "--genus", "1"],
        vec!["frob", "--algebra", r#"{"semisimple": [1, 0]}"#],
        vec!["openclosed", "cardy", "--traces", "1,2", "--k", "1"],
        vec!["selftest", "--only", "nonsense"],
        vec!["dw", "--group", "S5", "--genus", "3", "--method", "brute"],
    ] {
        let out = tqft(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn malformed_group_file() {
    let path = std::env::temp_dir().join(format!("tqft-bad-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"name": "bad", "order": 2, "cayley": [[0, 1], [0, 1]]}"#).unwrap();
    let out = tqft(&["group", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&path, r#"{"preset": "symmetric", "params": [3]}"#).unwrap();
    let v = json(&["group", "--file", path.to_str().unwrap()]);
    assert_eq!(v["order"], 6);
}

#[test]
fn selftest_fault_injection_exits_1_with_name() {
    let out = tqft(&["selftest", "--only", "double_s3", "--inject", "perturb-s", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fusion_integrality"));
    let clean = tqft(&["selftest", "--only", "double_s3"]);
    assert_eq!(clean.status.code(), Some(0));
}

#[test]
fn selftest_filter() {
    let v: Value = serde_json::from_slice(&tqft(&["selftest", "--only", "dw", "--format", "json"]).stdout).unwrap();
    let names: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"torus_count"));
    assert!(!names.contains(&"cardy"));
    assert!(v.get("elapsed").is_none());
}

#[test]
fn same_argv_same_bytes() {
    for args in [
        &["lattice", "--surface", "genus:1", "--group", "S3", "--shuffle", "15", "--format", "json"][..],
        &["chartable", "--group", "D4", "--format", "json"][..],
        &["double", "--group", "Q8", "--emit", "s,t", "--format", "csv"][..],
    ] {
        assert_eq!(tqft(args).stdout, tqft(args).stdout, "{args:?}");
    }
}

#[test]
fn formats() {
    let table = String::from_utf8(tqft(&["dw", "--group", "Z3", "--genus", "1"]).stdout).unwrap();
    assert!(table.lines().any(|l| l.starts_with("count") && l.trim_end().ends_with('9')));
    let csv = String::from_utf8(tqft(&["dw", "--group", "Z3", "--genus", "1", "--format", "csv"]).stdout).unwrap();
    assert!(csv.starts_with("key,value\n"));
    assert!(csv.contains("value.value,3"));
}
