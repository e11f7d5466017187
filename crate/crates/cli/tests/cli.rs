use serde_json::Value;
use sylow_cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["sylow", "--format", "json"];
    full.extend_from_slice(args);
    let out = run(full);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (
        out.code,
        serde_json::from_str(&out.stdout).expect("valid json"),
    )
}

#[test]
fn gens_lists_all_generators() {
    let (code, v) = json(&["gens", "--p", "3", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["sigma"].as_array().unwrap().len(), 3);
    assert_eq!(v["eta"].as_array().unwrap().len(), 3);
    assert_eq!(v["rho"].as_array().unwrap().len(), 2);
    assert_eq!(v["top_base"].as_array().unwrap().len(), 9);
    assert_eq!(v["sigma"][2]["cycles"], "(0 1 2)");
    assert_eq!(v["top_base"][4]["word"], "s2 ^ (s0 * s1)");
    assert_eq!(v["top_base"][4]["cycles"], "(12 13 14)");
}

#[test]
fn json_output_is_deterministic() {
    let a = run([
        "sylow",
        "--format",
        "json",
        "oracle",
        "crosscheck",
        "--p",
        "2",
        "--n",
        "3",
    ]);
    let b = run([
        "sylow",
        "--format",
        "json",
        "oracle",
        "crosscheck",
        "--p",
        "2",
        "--n",
        "3",
    ]);
    assert_eq!(a, b);
}

#[test]
fn decide_reports_complement_and_checks() {
    let (code, v) = json(&["decide", "--p", "3", "--n", "2", "--gens", "s0 * s1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "HasComplement");
    assert_eq!(v["Z"], serde_json::json!([1]));
    assert_eq!(v["complement"], "⟨ρ_1⟩");
    assert_eq!(v["orders"]["N"], 3);
    assert_eq!(v["orders"]["C"], 1);
    assert_eq!(v["orders"]["Pn"], 4);
    assert_eq!(v["checks"]["order"]["ok"], true);
}

#[test]
fn decide_reports_missing_complement() {
    let (code, v) = json(&[
        "decide",
        "--p",
        "3",
        "--n",
        "4",
        "--gens",
        "s1 * (s1 ^ s0) * (s1 ^ (s0 * s0)) * s3",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "NoComplement");
    assert!(v["witness"].is_object());
    assert!(v["orders"]["C"].is_null());
}

#[test]
fn cycle_notation_generators_are_accepted() {
    let (code, v) = json(&["decide", "--p", "2", "--n", "2", "--gens", "(0 2)(1 3)"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["depth"], 0);
}

#[test]
fn bad_input_exits_with_usage() {
    for args in [
        vec!["sylow", "gens", "--p", "4", "--n", "2"],
        vec!["sylow", "decide", "--p", "3", "--n", "2", "--gens", "s9"],
        vec!["sylow", "decide", "--p", "3", "--n", "2", "--gens", "(0 1)"],
        vec![
            "sylow",
            "partition",
            "--p",
            "3",
            "--n",
            "2",
            "--indices",
            "0,x",
        ],
        vec!["sylow", "frobnicate"],
    ] {
        let out = run(args.clone());
        assert_eq!(out.code, EXIT_USAGE, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn cap_is_reported_as_usage() {
    let out = run([
        "sylow",
        "--cap",
        "100",
        "oracle",
        "crosscheck",
        "--p",
        "2",
        "--n",
        "3",
    ]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("SYLOW_CAP"));
}

#[test]
fn failing_corpus_exits_with_one() {
    let dir = std::env::temp_dir().join(format!("sylow-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"schema": 1, "entries": [{"kind": "decide", "name": "wrong", "p": 2, "n": 2,
            "gens": ["s0"], "expect": {"depth": 1, "has_complement": true}}]}"#,
    )
    .unwrap();
    let out = run(["sylow", "corpus", "--file", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_FAILED);
    assert!(out.stdout.contains("FAIL wrong"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn builtin_corpus_passes() {
    let (code, v) = json(&["corpus"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["failed"], 0);
}

#[test]
fn gallery_and_oracle_summaries() {
    let (_, q) = json(&["gallery", "q8c4"]);
    assert_eq!(q["complement_count"], 6);
    let (_, m) = json(&["gallery", "mod9"]);
    assert_eq!(m["complement_count"], 54);
    let (_, a) = json(&["oracle", "abelian-max", "--p", "3", "--n", "2"]);
    assert_eq!(a["d_exponent"], 3);
    let (code, b) = json(&["oracle", "b-series", "--n", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(b["length"], 2);
}

#[test]
fn help_goes_to_stdout() {
    let out = run(["sylow", "--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("decide"));
}
