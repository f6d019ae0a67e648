//! End-to-end runs of the `hyperjet` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperjet")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = bin(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), value)
}

fn fixture(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyperjet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn bounds_reports() {
    let (code, v) = json(&["bounds", "kobayashi", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["exact"], "269");
    assert_eq!(v["result"]["simplified"], "384");
    let (_, v) = json(&["bounds", "debarre", "--n", "3"]);
    assert_eq!((v["result"]["exact"].as_str(), v["result"]["routes_agree"].as_bool()), (Some("25011"), Some(true)));
    let (_, v) = json(&["bounds", "dt", "--n", "3", "--c", "1"]);
    assert_eq!(v["result"]["exact"], "61265");
    assert_eq!(v["result"]["simplified"], "118098");
}

#[test]
fn decompose_verdicts() {
    let (code, v) = json(&["decompose", "--d", "265", "--n", "2", "--c", "1"]);
    assert_eq!(code, 0);
    assert_eq!((v["result"]["eps"].as_str(), v["result"]["r"].as_str()), (Some("1"), Some("65")));
    let out = bin(&["decompose", "--d", "100", "--n", "2", "--c", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL") && text.contains("infeasible") && text.contains("d0: 265"), "{text}");
}

#[test]
fn kjet_check_document() {
    let spec = fixture("kjet.json", r#"{"n": 2, "c": 1, "eps": [1], "deltas": [4], "r": "65"}"#);
    let (code, v) = json(&["kjet-check", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], true);
    let spec = fixture("kjet-bad.json", r#"{"n": 2, "c": 1, "eps": [1], "deltas": [4], "r": 10}"#);
    assert_eq!(json(&["kjet-check", "--spec", spec.to_str().unwrap()]).0, 1);
}

const W_INPUT: &str = r#"{
  "g": [
    {"vars": 2, "terms": [{"exp": [1, 0], "num": "1"}]},
    {"vars": 2, "terms": [{"exp": [0, 1], "num": "1"}, {"exp": [2, 0], "num": "3", "den": "2"}]}
  ]
}"#;

#[test]
fn wronskian_commands() {
    let input = fixture("w.json", W_INPUT);
    let p = input.to_str().unwrap();
    let (code, v) = json(&["wronskian", "eval", "--input", p]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["weight"], serde_json::json!({"homogeneous": 1}));
    for sub in ["invariance", "oracle"] {
        for seed in ["0", "7"] {
            let (code, v) = json(&["--seed", seed, "wronskian", sub, "--input", p]);
            assert_eq!(code, 0, "{sub} seed {seed}");
            assert_eq!(v["result"]["comparison"]["equal"], true);
            assert_eq!(v["seed"], seed.parse::<u64>().unwrap());
        }
    }
}

#[test]
fn fermat_commands() {
    let spec = fixture(
        "fermat.json",
        r#"{"n": 1, "eps": 0, "delta": 1, "r": 1, "k": 1,
            "coeffs": {"1,0": {"vars": 2, "terms": [{"exp": [0, 0], "num": "1"}]},
                       "0,1": {"vars": 2, "terms": [{"exp": [0, 0], "num": "1"}]}}}"#,
    );
    let (code, v) = json(&["fermat", "build", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["sections"][0]["degree"], 2);
    let diag = fixture(
        "diag.json",
        r#"{"n": 2, "eps": 0, "delta": 1, "r": 1, "k": 1,
            "coeffs": {"1,0,0": {"vars": 3, "terms": [{"exp": [0, 0, 0], "num": "1"}]},
                       "0,1,0": {"vars": 3, "terms": [{"exp": [0, 0, 0], "num": "1"}]},
                       "0,0,1": {"vars": 3, "terms": [{"exp": [0, 0, 0], "num": "1"}]}}}"#,
    );
    let (code, v) = json(&["fermat", "probe", "--spec", diag.to_str().unwrap(), "--trials", "100"]);
    assert_eq!(code, 0);
    assert!(v["result"]["probe"]["tested"].as_u64().unwrap() > 0);
    let family = fixture(
        "family.json",
        r#"{"sections": [{"n": 3, "eps": 1, "delta": 1, "r": 1, "k": 1},
                         {"n": 3, "eps": 1, "delta": 1, "r": 1, "k": 1}]}"#,
    );
    let (code, v) = json(&["fermat", "build", "--spec", family.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["sections"].as_array().unwrap().len(), 2);
    assert!(v["result"]["hypotheses"].is_object());
}

#[test]
fn verify_commands() {
    let (code, v) = json(&["verify", "single-mult", "--N", "2", "--delta", "2"]);
    assert_eq!(code, 0);
    assert_eq!((v["result"]["computed"].as_u64(), v["result"]["expected"].as_u64()), (Some(2), Some(2)));
    let (code, v) = json(&["verify", "product-mult", "--c", "2", "--k", "1", "--deltas", "2,3", "--i", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["computed"], 12);
    let spec = fixture("plucker.json", r#"{"mode": "single", "N": 3, "delta": 3}"#);
    let (code, v) = json(&["verify", "plucker", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["degrees"], serde_json::json!([1]));
    // Span(z0^2, z1^2) in degree-2 forms on P^2: columns z0^2, z0z1, z0z2, z1^2, z1z2, z2^2.
    let m = fixture("fiber.json", r#"{"N": 2, "delta": 2, "rows": [[1,0,0,0,0,0],[0,0,0,1,0,0]]}"#);
    let (code, v) = json(&["verify", "fiber", "--matrix", m.to_str().unwrap(), "--p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], serde_json::json!({"kind": "finite", "count": 1}));
    assert_eq!(v["result"]["heuristic"], true);
    let (_, v) = json(&["verify", "fiber", "--matrix", m.to_str().unwrap(), "--p", "5", "--J", "2"]);
    assert_eq!(v["result"]["verdict"], serde_json::json!({"kind": "finite", "count": 0}));
}

#[test]
fn malformed_inputs_exit_two() {
    assert_eq!(bin(&["bounds", "kobayashi", "--n", "x"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    let bad = fixture("bad.json", "{ not json");
    let out = bin(&["verify", "plucker", "--spec", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = bin(&["verify", "product-mult", "--c", "2", "--k", "1", "--deltas", "2", "--i", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let input = fixture("w-det.json", W_INPUT);
    for args in [
        vec!["--seed", "3", "wronskian", "oracle", "--input", input.to_str().unwrap()],
        vec!["--format", "json", "selftest", "--quick"],
    ] {
        let a = bin(&args);
        let b = bin(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}
